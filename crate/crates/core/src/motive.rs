//! Grothendieck-class candidates in `Z[L]` and executable verdicts for the
//! class identities of graph hypersurface complements.
//!
//! Counting specializes `L ↦ q`, so each identity in the Grothendieck ring
//! becomes an integer identity (or a congruence mod `q`) between point
//! counts over `F_q`. Everything here is that prime-field shadow; prime
//! powers are not covered.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::count::{count_with, pair_census, CountOptions, CountRecord, Method};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::graph::{EdgeKind, Multigraph};
use crate::poly::{bigint_from_json, bigint_to_json};
use crate::symanzik::psi_by_trees;

/// A polynomial in `L` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<serde_json::Value>", try_from = "Vec<serde_json::Value>")]
pub struct ClassPoly {
    coefficients: Vec<BigInt>,
}

impl ClassPoly {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        ClassPoly { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `L`
    pub fn lefschetz() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficients.first().cloned().unwrap_or_default()
    }

    pub fn eval(&self, l: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * l + c)
    }

    pub fn mul(&self, other: &ClassPoly) -> ClassPoly {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return ClassPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ClassPoly::new(out)
    }

    pub fn pow(&self, k: u32) -> ClassPoly {
        (0..k).fold(ClassPoly::from_i64(&[1]), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for ClassPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let power = match k {
                0 => String::new(),
                1 => "L".to_string(),
                _ => format!("L^{k}"),
            };
            match (power.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&power)?,
                (false, false) => write!(f, "{mag}*{power}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl From<ClassPoly> for Vec<serde_json::Value> {
    fn from(c: ClassPoly) -> Self {
        c.coefficients.iter().map(bigint_to_json).collect()
    }
}

impl TryFrom<Vec<serde_json::Value>> for ClassPoly {
    type Error = String;
    fn try_from(v: Vec<serde_json::Value>) -> std::result::Result<Self, String> {
        v.iter()
            .map(bigint_from_json)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(ClassPoly::new)
    }
}

/// Result of fitting a class to counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassOutcome {
    /// Fits every sample; labeled a candidate because polynomiality in `L`
    /// is observed, not proved.
    Candidate {
        class: ClassPoly,
        fit_primes: Vec<u64>,
        held_out_primes: Vec<u64>,
    },
    NotPolynomiallyConsistent { reason: String },
}

/// Held-out samples a fit must reproduce.
pub const HELD_OUT: usize = 2;

/// Lagrange interpolation of degree `≤ degree` through the first
/// `degree + 1` samples, confirmed on the rest.
pub fn interpolate_counts(samples: &[(u64, BigInt)], degree: usize) -> Result<ClassOutcome> {
    let needed = degree + 1 + HELD_OUT;
    let mut xs: Vec<u64> = samples.iter().map(|s| s.0).collect();
    xs.sort_unstable();
    xs.dedup();
    if xs.len() < needed || xs.len() != samples.len() {
        return Err(Error::InsufficientPrimes {
            needed,
            got: xs.len(),
        });
    }
    let (fit, held) = samples.split_at(degree + 1);

    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for (i, (xi, yi)) in fit.iter().enumerate() {
        // basis polynomial Π_{j≠i} (L - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for (j, (xj, _)) in fit.iter().enumerate() {
            if i == j {
                continue;
            }
            let root = BigRational::from_integer(BigInt::from(*xj));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &root;
            }
            basis = next;
            denom *= BigInt::from(*xi) - BigInt::from(*xj);
        }
        let scale = BigRational::new(yi.clone(), denom);
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &scale;
        }
    }

    let fit_primes: Vec<u64> = fit.iter().map(|s| s.0).collect();
    let held_out_primes: Vec<u64> = held.iter().map(|s| s.0).collect();
    if let Some((k, c)) = coeffs.iter().enumerate().find(|(_, c)| !c.is_integer()) {
        return Ok(ClassOutcome::NotPolynomiallyConsistent {
            reason: format!("coefficient of L^{k} is {c}, not an integer"),
        });
    }
    let class = ClassPoly::new(coeffs.into_iter().map(|c| c.to_integer()).collect());
    for (x, y) in held {
        let predicted = class.eval(&BigInt::from(*x));
        if &predicted != y {
            return Ok(ClassOutcome::NotPolynomiallyConsistent {
                reason: format!("fit {class} predicts {predicted} at q={x}, observed {y}"),
            });
        }
    }
    Ok(ClassOutcome::Candidate {
        class,
        fit_primes,
        held_out_primes,
    })
}

/// The constant `c` and tail `P` of `c + L·P`: the constant is the image in
/// `K(Var)/(L)`, and under the Deligne-Hodge map `L ↦ uv` the class becomes
/// `c + uv·P(uv)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeSplit {
    #[serde(with = "crate::poly::bigint_serde")]
    pub constant: BigInt,
    pub tail: ClassPoly,
}

pub fn hodge_form(c: &ClassPoly) -> HodgeSplit {
    HodgeSplit {
        constant: c.constant_term(),
        tail: ClassPoly::new(c.coefficients.iter().skip(1).cloned().collect()),
    }
}

/// Class of `Y_G` mod `(L)`: 0 if some edge is not a loop, `(-1)^n` when
/// all `n` edges are loops.
pub fn predicted_sb_constant(g: &Multigraph) -> i64 {
    if g.has_loop_only_edges() {
        if g.edge_count() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "modL")]
    ModL,
    #[serde(rename = "Lrat")]
    LRational,
    #[serde(rename = "dc-bridge")]
    DcBridge,
    #[serde(rename = "dc-loop")]
    DcLoop,
    #[serde(rename = "dc-regular")]
    DcRegular,
}

impl Theorem {
    fn for_edge(kind: EdgeKind) -> Theorem {
        match kind {
            EdgeKind::Bridge => Theorem::DcBridge,
            EdgeKind::Loop => Theorem::DcLoop,
            EdgeKind::Regular => Theorem::DcRegular,
        }
    }
}

/// One prime's comparison. For congruences both values are residues in
/// `0..q`; for identities they are the two sides as integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub q: u64,
    pub expected: i128,
    pub observed: i128,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceVerdict {
    pub graph: String,
    pub theorem: Theorem,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edge: Option<usize>,
    pub claim: String,
    pub observations: Vec<Observation>,
    pub pass: bool,
}

impl CongruenceVerdict {
    fn new(
        graph: &str,
        theorem: Theorem,
        edge: Option<usize>,
        claim: String,
        observations: Vec<Observation>,
    ) -> Self {
        let pass = observations.iter().all(|o| o.pass);
        CongruenceVerdict {
            graph: graph.to_string(),
            theorem,
            edge,
            claim,
            observations,
            pass,
        }
    }
}

/// Counting strategy shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checker {
    pub method: Method,
    pub opts: CountOptions,
}

impl Default for Checker {
    fn default() -> Self {
        Checker {
            method: Method::Fibered,
            opts: CountOptions::default(),
        }
    }
}

impl Checker {
    pub fn new(method: Method, opts: CountOptions) -> Self {
        Checker { method, opts }
    }

    pub fn count_graph(&self, g: &Multigraph, q: Prime) -> Result<CountRecord> {
        count_with(&psi_by_trees(g), q, self.method, self.opts)
    }

    pub fn count_graph_at(&self, g: &Multigraph, primes: &[Prime]) -> Result<Vec<CountRecord>> {
        primes.iter().map(|&q| self.count_graph(g, q)).collect()
    }

    /// `|Y_G(F_q)| ≡ predicted_sb_constant(G) mod q`.
    pub fn check_modl_congruence(
        &self,
        id: &str,
        g: &Multigraph,
        primes: &[Prime],
    ) -> Result<CongruenceVerdict> {
        Ok(modl_verdict(id, g, &self.count_graph_at(g, primes)?))
    }

    /// `|X_G(F_q)| ≡ 1 mod q` for a non-forest with a non-looping edge.
    pub fn check_projective_congruence(
        &self,
        id: &str,
        g: &Multigraph,
        primes: &[Prime],
    ) -> Result<CongruenceVerdict> {
        projective_applicable(g)?;
        projective_verdict(id, g, &self.count_graph_at(g, primes)?)
    }

    /// The deletion-contraction class identity for edge `label`, at `q`.
    pub fn dc_identity_check(
        &self,
        id: &str,
        g: &Multigraph,
        label: usize,
        q: Prime,
    ) -> Result<CongruenceVerdict> {
        let lhs = self.count_graph(g, q)?.complement_count;
        self.dc_verdict(id, g, label, q, lhs)
    }

    /// As [`Checker::dc_identity_check`] with `|Y_G(F_q)|` already counted.
    pub fn dc_verdict(
        &self,
        id: &str,
        g: &Multigraph,
        label: usize,
        q: Prime,
        complement: u64,
    ) -> Result<CongruenceVerdict> {
        let kind = g.classify_edge(label)?;
        let deleted = g.delete_edge(label)?;
        let qv = q.get() as i128;
        let (claim, rhs) = match kind {
            EdgeKind::Bridge => {
                let y = self.count_graph(&deleted, q)?.complement_count as i128;
                ("|Y_G| = q·|Y_{G∖e}|", qv * y)
            }
            EdgeKind::Loop => {
                let y = self.count_graph(&deleted, q)?.complement_count as i128;
                ("|Y_G| = (q-1)·|Y_{G∖e}|", (qv - 1) * y)
            }
            EdgeKind::Regular => {
                let census = pair_census(
                    &psi_by_trees(&deleted),
                    &psi_by_trees(&g.contract_edge(label)?),
                    q,
                    self.opts,
                )?;
                let base = qv.pow(g.edge_count() as u32 - 1);
                let z = census.both_zero as i128;
                let y = census.first_nonzero as i128;
                ("|Y_G| = q·(q^{n-1} - |Z|) - |Y_{G∖e}|", qv * (base - z) - y)
            }
        };
        let observed = complement as i128;
        Ok(CongruenceVerdict::new(
            id,
            Theorem::for_edge(kind),
            Some(label),
            claim.to_string(),
            vec![Observation {
                q: q.get(),
                expected: rhs,
                observed,
                pass: rhs == observed,
            }],
        ))
    }

    /// Counts `|Y_G|` at every prime and fits a class of degree `≤ n`.
    pub fn interpolate_class(&self, g: &Multigraph, primes: &[Prime]) -> Result<ClassOutcome> {
        let needed = g.edge_count() + 1 + HELD_OUT;
        if primes.len() < needed {
            return Err(Error::InsufficientPrimes {
                needed,
                got: primes.len(),
            });
        }
        let samples = primes
            .iter()
            .map(|&q| {
                self.count_graph(g, q)
                    .map(|r| (q.get(), BigInt::from(r.complement_count)))
            })
            .collect::<Result<Vec<_>>>()?;
        interpolate_counts(&samples, g.edge_count())
    }
}

pub fn modl_verdict(id: &str, g: &Multigraph, counts: &[CountRecord]) -> CongruenceVerdict {
    let constant = predicted_sb_constant(g);
    let observations = counts
        .iter()
        .map(|rec| {
            let q = rec.q as i128;
            let expected = (constant as i128).rem_euclid(q);
            let observed = (rec.complement_count as i128).rem_euclid(q);
            Observation {
                q: rec.q,
                expected,
                observed,
                pass: expected == observed,
            }
        })
        .collect();
    CongruenceVerdict::new(
        id,
        Theorem::ModL,
        None,
        format!("|Y_G| ≡ {constant} mod q"),
        observations,
    )
}

fn projective_applicable(g: &Multigraph) -> Result<()> {
    if g.is_forest() {
        return Err(Error::Inapplicable("graph is a forest".into()));
    }
    if g.has_loop_only_edges() {
        return Err(Error::Inapplicable("every edge is a looping edge".into()));
    }
    Ok(())
}

pub fn projective_verdict(
    id: &str,
    g: &Multigraph,
    counts: &[CountRecord],
) -> Result<CongruenceVerdict> {
    projective_applicable(g)?;
    let observations = counts
        .iter()
        .map(|rec| {
            let x = crate::count::count_projective(rec)? as i128;
            let observed = x.rem_euclid(rec.q as i128);
            Ok(Observation {
                q: rec.q,
                expected: 1,
                observed,
                pass: observed == 1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CongruenceVerdict::new(
        id,
        Theorem::LRational,
        None,
        "|X_G| ≡ 1 mod q".to_string(),
        observations,
    ))
}

/// True when the constant term is the predicted image mod `(L)`.
pub fn constant_matches(split: &HodgeSplit, g: &Multigraph) -> bool {
    split.constant.to_i64() == Some(predicted_sb_constant(g))
}
