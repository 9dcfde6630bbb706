//! Grothendieck–Witt classes and the equality decision procedure.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use serde::ser::{Serialize, SerializeMap, Serializer};

use super::hilbert::{hasse_invariant, Place};
use crate::arith;
use crate::error::{Error, Result};
use crate::fields::{Elem, Field, FieldKind};

/// A class `⟨a_1, …, a_n⟩` in GW(k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWClass {
    field: Field,
    diag: Vec<Elem>,
    radical_dim: usize,
    /// Over ℚ: integers whose prime divisors, together with 2, cover every
    /// prime where the Hasse invariant can be −1.
    witnesses: Option<Vec<BigInt>>,
}

/// Outcome of [`gw_equal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Equal,
    NotEqual,
    /// Every computed invariant agrees but equality could not be certified.
    ConsistentUndecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Equal => "Equal",
            Verdict::NotEqual => "NotEqual",
            Verdict::ConsistentUndecided => "ConsistentUndecided",
        };
        write!(f, "{s}")
    }
}

/// Greedy hyperbolic reduction: `count` copies of ℍ plus `residue`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub count: usize,
    pub residue: Vec<Elem>,
}

impl GWClass {
    /// Class of a diagonal form; zero entries are dropped into the radical.
    pub fn from_diag(field: &Field, diag: Vec<Elem>) -> GWClass {
        let before = diag.len();
        let diag: Vec<Elem> = diag.into_iter().filter(|a| !field.is_zero(a)).collect();
        GWClass {
            field: field.clone(),
            radical_dim: before - diag.len(),
            diag,
            witnesses: None,
        }
    }

    /// `count · ℍ` written as `⟨1, -1⟩` repeated.
    pub fn hyperbolic(field: &Field, count: usize) -> GWClass {
        let mut diag = Vec::with_capacity(2 * count);
        for _ in 0..count {
            diag.push(field.one());
            diag.push(field.neg(&field.one()));
        }
        GWClass::from_diag(field, diag)
    }

    pub(crate) fn with_radical(mut self, radical_dim: usize) -> GWClass {
        self.radical_dim += radical_dim;
        self
    }

    pub(crate) fn with_witnesses(mut self, witnesses: Option<Vec<BigInt>>) -> GWClass {
        if witnesses.is_some() {
            self.witnesses = witnesses;
        }
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn diag(&self) -> &[Elem] {
        &self.diag
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Dimension of the radical dropped while diagonalizing.
    pub fn radical_dim(&self) -> usize {
        self.radical_dim
    }

    /// Orthogonal sum.
    pub fn sum(&self, other: &GWClass) -> Result<GWClass> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut diag = self.diag.clone();
        diag.extend(other.diag.iter().cloned());
        Ok(GWClass {
            field: self.field.clone(),
            diag,
            radical_dim: self.radical_dim + other.radical_dim,
            witnesses: None,
        })
    }

    /// Product of the diagonal entries (1 for the zero form).
    pub fn det(&self) -> Elem {
        self.field.product(&self.diag)
    }

    /// Square class of the determinant.
    pub fn disc(&self) -> Result<Elem> {
        self.field.square_class_rep(&self.det())
    }

    /// Signature over ℚ.
    pub fn signature(&self) -> Option<i64> {
        if !self.field.is_rationals() {
            return None;
        }
        Some(
            self.diag
                .iter()
                .map(|a| {
                    if self.field.as_rational(a).expect("rational").is_positive() {
                        1
                    } else {
                        -1
                    }
                })
                .sum(),
        )
    }

    fn rationals(&self) -> Option<Vec<BigRational>> {
        self.diag
            .iter()
            .map(|a| self.field.as_rational(a).cloned())
            .collect()
    }

    /// Primes other than 2 where the Hasse invariant may be nontrivial.
    pub fn relevant_primes(&self) -> BTreeSet<BigUint> {
        let mut primes = BTreeSet::new();
        primes.insert(BigUint::from(2u32));
        let Some(diag) = self.rationals() else {
            return primes;
        };
        let witnesses: Vec<BigInt> = match &self.witnesses {
            Some(w) => w.clone(),
            None => diag
                .iter()
                .flat_map(|r| [r.numer().clone(), r.denom().clone()])
                .collect(),
        };
        for w in witnesses {
            primes.extend(arith::prime_divisors(&w));
        }
        primes
    }

    /// Hasse invariant at a place, over ℚ.
    pub fn hasse(&self, place: &Place) -> Option<i8> {
        let diag = self.rationals()?;
        hasse_invariant(&diag, place).ok()
    }

    /// Hasse invariants at ∞ and every relevant prime, over ℚ.
    pub fn hasse_data(&self) -> Option<Vec<(Place, i8)>> {
        if !self.field.is_rationals() {
            return None;
        }
        let places = std::iter::once(Place::Infinity)
            .chain(self.relevant_primes().into_iter().map(Place::Prime));
        Some(
            places
                .map(|p| (p.clone(), self.hasse(&p).expect("rational class")))
                .collect(),
        )
    }

    /// Representative of an entry's square class where canonical ones exist.
    fn class_rep(&self, a: &Elem) -> Elem {
        self.field.square_class_rep(a).unwrap_or_else(|_| a.clone())
    }

    /// Text form `aH + <c1,...,cm>` after hyperbolic reduction.
    pub fn render(&self) -> String {
        let red = hyperbolic_reduce(self);
        let mut parts = Vec::new();
        match red.count {
            0 => {}
            1 => parts.push("H".to_string()),
            c => parts.push(format!("{c}H")),
        }
        if !red.residue.is_empty() {
            let entries: Vec<String> = red
                .residue
                .iter()
                .map(|a| self.field.format(&self.class_rep(a)))
                .collect();
            parts.push(format!("<{}>", entries.join(",")));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// JSON-ready view of the class and its invariants.
    pub fn to_json(&self) -> GWClassJson {
        let red = hyperbolic_reduce(self);
        let k = &self.field;
        GWClassJson {
            field: k.to_string(),
            diag: self.diag.iter().map(|a| k.format(a)).collect(),
            rank: self.rank(),
            disc: k.format(&self.disc().unwrap_or_else(|_| self.det())),
            signature: self.signature(),
            hasse: self
                .hasse_data()
                .map(|h| HasseMap(h.into_iter().map(|(p, s)| (p.to_string(), s)).collect())),
            hyperbolic_count: red.count,
            residue: red
                .residue
                .iter()
                .map(|a| k.format(&self.class_rep(a)))
                .collect(),
        }
    }
}

impl fmt::Display for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Serialized form of a [`GWClass`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GWClassJson {
    pub field: String,
    pub diag: Vec<String>,
    pub rank: usize,
    pub disc: String,
    pub signature: Option<i64>,
    pub hasse: Option<HasseMap>,
    pub hyperbolic_count: usize,
    pub residue: Vec<String>,
}

/// Place-to-symbol map serialized in place order (∞ first, then primes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseMap(pub Vec<(String, i8)>);

impl Serialize for HasseMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn square_or_false(k: &Field, a: &Elem) -> bool {
    k.is_square(a).unwrap_or(false)
}

/// Greedily removes pairs `⟨a, b⟩` with `-ab` a square. Fields where square
/// testing is unavailable are left unreduced.
pub fn hyperbolic_reduce(c: &GWClass) -> Reduced {
    let k = &c.field;
    if matches!(k.kind(), FieldKind::Extension { base, .. } if matches!(base.kind(), FieldKind::RationalFunctions { .. }))
    {
        return Reduced {
            count: 0,
            residue: c.diag.clone(),
        };
    }
    let n = c.diag.len();
    let mut used = vec![false; n];
    let mut count = 0;
    for i in 0..n {
        if used[i] {
            continue;
        }
        let partner = (i + 1..n)
            .find(|&j| !used[j] && square_or_false(k, &k.neg(&k.mul(&c.diag[i], &c.diag[j]))));
        if let Some(j) = partner {
            used[i] = true;
            used[j] = true;
            count += 1;
        }
    }
    let residue = (0..n)
        .filter(|&i| !used[i])
        .map(|i| c.diag[i].clone())
        .collect();
    Reduced { count, residue }
}

/// Decides equality in GW(k): completely over ℚ and finite fields, soundly
/// but partially elsewhere.
pub fn gw_equal(x: &GWClass, y: &GWClass) -> Result<Verdict> {
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    let k = &x.field;
    if x.rank() != y.rank() {
        return Ok(Verdict::NotEqual);
    }
    if x.rank() == 0 {
        return Ok(Verdict::Equal);
    }
    let same_disc = k.same_square_class(&x.det(), &y.det());
    if k.is_rationals() {
        if x.signature() != y.signature() || !same_disc? {
            return Ok(Verdict::NotEqual);
        }
        let mut primes = x.relevant_primes();
        primes.extend(y.relevant_primes());
        for p in primes {
            let place = Place::Prime(p);
            if x.hasse(&place) != y.hasse(&place) {
                return Ok(Verdict::NotEqual);
            }
        }
        return Ok(Verdict::Equal);
    }
    if k.is_finite() {
        return Ok(if same_disc? {
            Verdict::Equal
        } else {
            Verdict::NotEqual
        });
    }
    match same_disc {
        Ok(false) => return Ok(Verdict::NotEqual),
        Ok(true) | Err(Error::UnsupportedField(_)) => {}
        Err(e) => return Err(e),
    }
    let (rx, ry) = (hyperbolic_reduce(x), hyperbolic_reduce(y));
    if rx.count == ry.count && residues_match(k, &rx.residue, &ry.residue) {
        return Ok(Verdict::Equal);
    }
    Ok(Verdict::ConsistentUndecided)
}

/// Whether the residues agree entrywise up to squares under some pairing.
/// Square-class equivalence is transitive, so greedy matching is exhaustive.
fn residues_match(k: &Field, a: &[Elem], b: &[Elem]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let found = (0..b.len()).find(|&j| {
            !used[j]
                && (x == &b[j]
                    || k.div(x, &b[j])
                        .map(|q| square_or_false(k, &q))
                        .unwrap_or(false))
        });
        match found {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_elem, parse_field};

    fn class(field: &str, entries: &[&str]) -> GWClass {
        let k = parse_field(field).unwrap();
        GWClass::from_diag(
            &k,
            entries.iter().map(|e| parse_elem(e, &k).unwrap()).collect(),
        )
    }

    #[test]
    fn reduction_examples() {
        let r = hyperbolic_reduce(&class("Q", &["1", "-1", "3"]));
        assert_eq!(r.count, 1);
        assert_eq!(r.residue, vec![Field::rationals().from_i64(3)]);
        let r = hyperbolic_reduce(&class("Q", &["2", "-8"]));
        assert_eq!((r.count, r.residue.len()), (1, 0));
        let r = hyperbolic_reduce(&class("Q", &["1", "1"]));
        assert_eq!((r.count, r.residue.len()), (0, 2));
    }

    #[test]
    fn equality_examples() {
        let k = Field::rationals();
        let h = GWClass::hyperbolic(&k, 1);
        assert_eq!(gw_equal(&class("Q", &["1", "-1"]), &h), Ok(Verdict::Equal));
        assert_eq!(
            gw_equal(&class("Q", &["1", "1"]), &h),
            Ok(Verdict::NotEqual)
        );
        let f5 = parse_field("F5").unwrap();
        assert_eq!(
            gw_equal(&class("F5", &["1", "1"]), &GWClass::hyperbolic(&f5, 1)),
            Ok(Verdict::Equal)
        );
        assert_eq!(
            gw_equal(&class("F5", &["1", "2"]), &GWClass::hyperbolic(&f5, 1)),
            Ok(Verdict::NotEqual)
        );
        assert_eq!(
            gw_equal(&class("Q", &["1"]), &class("F5", &["1"])),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn hasse_separates_same_signature_and_disc() {
        // <1,1> and <2,2> share rank, signature and discriminant; (2,2)_p = 1 everywhere
        // but <3,3> differs from <1,1> at p = 3.
        assert_eq!(
            gw_equal(&class("Q", &["1", "1"]), &class("Q", &["2", "2"])),
            Ok(Verdict::Equal)
        );
        assert_eq!(
            gw_equal(&class("Q", &["1", "1"]), &class("Q", &["3", "3"])),
            Ok(Verdict::NotEqual)
        );
    }

    #[test]
    fn rational_function_field_verdicts() {
        let a = class("F5(t)", &["t", "1", "-1"]);
        let b = class("F5(t)", &["4t", "1", "4"]);
        assert_eq!(gw_equal(&a, &b), Ok(Verdict::Equal));
        let c = class("F5(t)", &["t", "t+1", "1"]);
        let d = class("F5(t)", &["1", "t", "t+1"]);
        assert_eq!(gw_equal(&c, &d), Ok(Verdict::Equal));
        // -1 is a square mod 5, so use F3 where <t,t> is not visibly hyperbolic.
        assert_eq!(class("F5(t)", &["t", "t"]).to_string(), "H");
        let e = class("F3(t)", &["t", "t"]);
        let f = class("F3(t)", &["t+1", "t+1"]);
        assert_eq!(gw_equal(&e, &f), Ok(Verdict::ConsistentUndecided));
        assert_eq!(
            gw_equal(&a, &class("F5(t)", &["2t", "1", "-1"])),
            Ok(Verdict::NotEqual)
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(class("Q", &["3", "12", "-3"]).to_string(), "H + <3>");
        assert_eq!(class("Q", &[]).to_string(), "0");
        assert_eq!(
            class("Q", &["1", "-1", "2", "-2", "5"]).to_string(),
            "2H + <5>"
        );
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&class("Q", &["3", "12", "-3"]).to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"field":"Q","diag":["3","12","-3"],"rank":3,"disc":"-3","signature":1,"hasse":{"inf":1,"2":-1,"3":-1},"hyperbolic_count":1,"residue":["3"]}"#
        );
    }
}
