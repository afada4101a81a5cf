//! Multilinear integer polynomials with terms keyed by variable bitmasks.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Prime;

/// A polynomial in the variables `t_i`, `i` in `vars`, where every variable
/// occurs with exponent at most one.
///
/// `vars` is the ambient variable set; it fixes the affine space the
/// polynomial is counted in, even for variables that occur in no term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PolyRepr", try_from = "PolyRepr")]
pub struct MultilinearPoly {
    vars: u64,
    terms: BTreeMap<u64, BigInt>,
}

impl MultilinearPoly {
    pub fn zero(vars: u64) -> Self {
        MultilinearPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: u64) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: u64, c: BigInt) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        p
    }

    /// Collects terms, merging repeated masks and dropping zeros.
    pub fn from_terms<I>(vars: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, BigInt)>,
    {
        let mut p = Self::zero(vars);
        for (mask, c) in terms {
            if mask & !vars != 0 {
                return Err(Error::UnknownVariable(
                    (mask & !vars).trailing_zeros() as usize,
                ));
            }
            p.add_term(mask, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, mask: u64, c: BigInt) {
        let slot = self.terms.entry(mask).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn vars(&self) -> u64 {
        self.vars
    }

    pub fn var_count(&self) -> usize {
        self.vars.count_ones() as usize
    }

    /// Ambient variable labels, ascending.
    pub fn var_labels(&self) -> Vec<usize> {
        mask_labels(self.vars)
    }

    /// Terms in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> + '_ {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coefficient(&self, mask: u64) -> BigInt {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and non-zero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&m| m == 0)
    }

    /// The common total degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.count_ones());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Value at the all-ones point, computed exactly.
    pub fn value_at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.vars |= other.vars;
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    /// `t_label · self`; `label` must not occur in any term.
    pub fn mul_var(&self, label: usize) -> Result<Self> {
        let bit = 1u64 << label;
        if self.terms.keys().any(|m| m & bit != 0) {
            return Err(Error::NotMultilinear);
        }
        Ok(MultilinearPoly {
            vars: self.vars | bit,
            terms: self.terms.iter().map(|(m, c)| (m | bit, c.clone())).collect(),
        })
    }

    /// Product of polynomials in disjoint ambient variable sets.
    pub fn mul_disjoint(&self, other: &Self) -> Result<Self> {
        if self.vars & other.vars != 0 {
            return Err(Error::NotMultilinear);
        }
        let mut out = Self::zero(self.vars | other.vars);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                out.add_term(a | b, ca * cb);
            }
        }
        Ok(out)
    }

    /// Re-declares the ambient variable set; every term must fit in it.
    pub fn with_vars(&self, vars: u64) -> Result<Self> {
        Self::from_terms(vars, self.terms.iter().map(|(&m, c)| (m, c.clone())))
    }

    /// Splits `p = t_label · a + b` with `a` and `b` free of `t_label`.
    /// Both halves have ambient set `vars ∖ {label}`.
    pub fn split_var(&self, label: usize) -> Result<(Self, Self)> {
        let bit = 1u64 << label;
        if self.vars & bit == 0 {
            return Err(Error::UnknownVariable(label));
        }
        let rest = self.vars & !bit;
        let mut a = Self::zero(rest);
        let mut b = Self::zero(rest);
        for (&m, c) in &self.terms {
            if m & bit != 0 {
                a.terms.insert(m & !bit, c.clone());
            } else {
                b.terms.insert(m, c.clone());
            }
        }
        Ok((a, b))
    }

    /// Exact value mod `q` at `point`, whose coordinates are listed in
    /// ascending label order of the ambient variables.
    pub fn evaluate(&self, point: &[u64], q: Prime) -> Result<u64> {
        if point.len() != self.var_count() {
            return Err(Error::PointLength {
                expected: self.var_count(),
                got: point.len(),
            });
        }
        let reduced = self.reduce(q);
        let xs: Vec<u64> = point.iter().map(|&x| x % q.get()).collect();
        Ok(reduced.eval_local(&xs))
    }

    /// Coefficients reduced mod `q`, masks re-indexed to local variable
    /// positions `0..var_count`.
    pub(crate) fn reduce(&self, q: Prime) -> ReducedPoly {
        let labels = self.var_labels();
        let qi = BigInt::from(q.get());
        let terms = self
            .terms
            .iter()
            .filter_map(|(&m, c)| {
                let r = c.mod_floor_nonneg(&qi);
                (r != 0).then(|| (localize(m, &labels), r))
            })
            .collect();
        ReducedPoly { q, terms }
    }
}

trait ModFloor {
    fn mod_floor_nonneg(&self, q: &BigInt) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_nonneg(&self, q: &BigInt) -> u64 {
        let mut r = self % q;
        if r.is_negative() {
            r += q;
        }
        r.to_u64().expect("residue below q")
    }
}

/// A polynomial mod `q` over local variable positions; the per-term product
/// evaluator used by the brute-force counter.
#[derive(Debug, Clone)]
pub(crate) struct ReducedPoly {
    q: Prime,
    pub(crate) terms: Vec<(u64, u64)>,
}

impl ReducedPoly {
    #[inline]
    pub(crate) fn eval_local(&self, xs: &[u64]) -> u64 {
        let q = self.q;
        let mut acc = 0u64;
        for &(mask, c) in &self.terms {
            let mut v = c;
            let mut bits = mask;
            while bits != 0 && v != 0 {
                let i = bits.trailing_zeros() as usize;
                v = q.mul(v, xs[i]);
                bits &= bits - 1;
            }
            acc = q.add(acc, v);
        }
        acc
    }
}

pub(crate) fn mask_labels(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

/// Re-indexes a label mask to positions within `labels` (ascending).
pub(crate) fn localize(mask: u64, labels: &[usize]) -> u64 {
    labels
        .iter()
        .enumerate()
        .filter(|(_, &l)| mask & (1 << l) != 0)
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&mask, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let monomial: Vec<String> = mask_labels(mask).iter().map(|l| format!("t{l}")).collect();
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&monomial.join("*"))?;
            } else {
                write!(f, "{mag}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// JSON form: ambient labels plus `(mask, coefficient)` pairs. Coefficients
/// that fit in an `i64` are numbers, larger ones decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<usize>,
    terms: Vec<(u64, serde_json::Value)>,
}

impl From<MultilinearPoly> for PolyRepr {
    fn from(p: MultilinearPoly) -> Self {
        PolyRepr {
            vars: p.var_labels(),
            terms: p.terms.iter().map(|(&m, c)| (m, bigint_to_json(c))).collect(),
        }
    }
}

impl TryFrom<PolyRepr> for MultilinearPoly {
    type Error = String;
    fn try_from(r: PolyRepr) -> std::result::Result<Self, String> {
        let mut vars = 0u64;
        for l in r.vars {
            if l >= 64 {
                return Err(format!("variable label {l} out of range"));
            }
            vars |= 1 << l;
        }
        let terms = r
            .terms
            .into_iter()
            .map(|(m, v)| bigint_from_json(&v).map(|c| (m, c)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        MultilinearPoly::from_terms(vars, terms).map_err(|e| e.to_string())
    }
}

pub(crate) fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("coefficient {n} is not an integer")),
        serde_json::Value::String(s) => s.parse().map_err(|_| format!("bad coefficient {s:?}")),
        other => Err(format!("bad coefficient {other}")),
    }
}

/// Serde adapter writing a `BigInt` the same way as polynomial coefficients.
pub(crate) mod bigint_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        super::bigint_to_json(c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::bigint_from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(vars: u64, terms: &[(u64, i64)]) -> MultilinearPoly {
        MultilinearPoly::from_terms(vars, terms.iter().map(|&(m, c)| (m, BigInt::from(c)))).unwrap()
    }

    #[test]
    fn display_sorted_by_mask() {
        let b3 = poly(0b111, &[(0b110, 1), (0b011, 1), (0b101, 1)]);
        assert_eq!(b3.to_string(), "t0*t1 + t0*t2 + t1*t2");
        let mixed = poly(0b11, &[(0, 1), (0b01, -2), (0b10, -1)]);
        assert_eq!(mixed.to_string(), "1 - 2*t0 - t1");
        assert_eq!(MultilinearPoly::zero(0).to_string(), "0");
        assert_eq!(poly(1, &[(1, -1)]).to_string(), "-t0");
    }

    #[test]
    fn evaluate_examples() {
        let q5 = Prime::new(5).unwrap();
        let c3 = poly(0b111, &[(1, 1), (2, 1), (4, 1)]);
        assert_eq!(c3.evaluate(&[1, 1, 1], q5), Ok(3));
        let b3 = poly(0b111, &[(0b011, 1), (0b101, 1), (0b110, 1)]);
        assert_eq!(b3.evaluate(&[1, 2, 3], Prime::new(7).unwrap()), Ok(4));
        let one = MultilinearPoly::one(0b11);
        assert_eq!(one.evaluate(&[4, 2], q5), Ok(1));
        assert_eq!(
            one.evaluate(&[4], q5),
            Err(Error::PointLength {
                expected: 2,
                got: 1
            })
        );
        let neg = poly(0b1, &[(1, -3), (0, 1)]);
        assert_eq!(neg.evaluate(&[2], q5), Ok(0));
    }

    #[test]
    fn evaluate_uses_ambient_order() {
        // variables t1 and t3 only; point lists (t1, t3)
        let p = poly(0b1010, &[(0b1000, 1), (0b0010, 2)]);
        assert_eq!(p.evaluate(&[1, 3], Prime::new(11).unwrap()), Ok(5));
    }

    #[test]
    fn split_examples() {
        let c3 = poly(0b111, &[(1, 1), (2, 1), (4, 1)]);
        let (a, b) = c3.split_var(2).unwrap();
        assert_eq!(a, MultilinearPoly::one(0b011));
        assert_eq!(b, poly(0b011, &[(1, 1), (2, 1)]));

        let lp = poly(1, &[(1, 1)]);
        let (a, b) = lp.split_var(0).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("1".into(), "0".into()));

        let (a, b) = MultilinearPoly::one(0b1).split_var(0).unwrap();
        assert!(a.is_zero());
        assert_eq!(b, MultilinearPoly::one(0));

        assert_eq!(c3.split_var(5), Err(Error::UnknownVariable(5)));
    }

    #[test]
    fn products() {
        let x = poly(0b01, &[(1, 1), (0, 1)]);
        let y = poly(0b10, &[(2, 1)]);
        assert_eq!(x.mul_disjoint(&y).unwrap().to_string(), "t1 + t0*t1");
        assert_eq!(x.mul_disjoint(&x), Err(Error::NotMultilinear));
        assert_eq!(y.mul_var(0).unwrap().to_string(), "t0*t1");
        assert_eq!(y.mul_var(1), Err(Error::NotMultilinear));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(poly(0b111, &[(3, 1), (5, 1)]).homogeneous_degree(), Some(2));
        assert_eq!(poly(0b111, &[(3, 1), (4, 1)]).homogeneous_degree(), None);
        assert_eq!(MultilinearPoly::zero(1).homogeneous_degree(), None);
    }

    #[test]
    fn json_round_trip_with_big_coefficients() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = MultilinearPoly::from_terms(0b11, [(0b01, big), (0b10, BigInt::from(-4))]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"vars":[0,1],"terms":[[1,"123456789012345678901234567890"],[2,-4]]}"#
        );
        assert_eq!(serde_json::from_str::<MultilinearPoly>(&s).unwrap(), p);
        assert!(serde_json::from_str::<MultilinearPoly>(r#"{"vars":[0],"terms":[[2,1]]}"#).is_err());
    }
}
