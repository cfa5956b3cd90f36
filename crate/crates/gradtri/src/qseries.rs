//! Truncated Laurent series in `q` with natural-number coefficients.
//!
//! A `Down` series lives in `N((q^-1))`: it has finitely many positive
//! exponents and its coefficients are known for exponents `>= -trunc`.
//! An `Up` series is the mirror image, known for exponents `<= trunc`.
//! A `Poly` series is an exact Laurent polynomial.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Down,
    Up,
    Poly,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
            Direction::Poly => Direction::Poly,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Down => "down",
            Direction::Up => "up",
            Direction::Poly => "poly",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    dir: Direction,
    coeffs: BTreeMap<i64, u64>,
    trunc: i64,
}

impl QSeries {
    pub fn zero_poly() -> QSeries {
        QSeries { dir: Direction::Poly, coeffs: BTreeMap::new(), trunc: 0 }
    }

    /// The zero series known on the window of `dir` with order `trunc`.
    pub fn zero(dir: Direction, trunc: i64) -> QSeries {
        QSeries { dir, coeffs: BTreeMap::new(), trunc }
    }

    /// `c * q^e` as an exact polynomial.
    pub fn monomial(e: i64, c: u64) -> QSeries {
        QSeries::from_terms(Direction::Poly, 0, [(e, c)])
    }

    pub fn one() -> QSeries {
        QSeries::monomial(0, 1)
    }

    /// Builds a series, dropping zero terms and terms outside the known window.
    pub fn from_terms(dir: Direction, trunc: i64, terms: impl IntoIterator<Item = (i64, u64)>) -> QSeries {
        let mut s = QSeries::zero(dir, trunc);
        for (e, c) in terms {
            if c != 0 && s.knows(e) {
                *s.coeffs.entry(e).or_insert(0) += c;
            }
        }
        s
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    /// Truncation order; `None` for exact polynomials.
    pub fn trunc_order(&self) -> Option<i64> {
        match self.dir {
            Direction::Poly => None,
            _ => Some(self.trunc),
        }
    }

    pub fn knows(&self, e: i64) -> bool {
        match self.dir {
            Direction::Down => e >= -self.trunc,
            Direction::Up => e <= self.trunc,
            Direction::Poly => true,
        }
    }

    pub fn coeff(&self, e: i64) -> Result<u64> {
        if !self.knows(e) {
            return Err(Error::WindowExceedsKnowledge(format!("exponent {e} of {self}")));
        }
        Ok(self.coeffs.get(&e).copied().unwrap_or(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Narrows the known window; exact polynomials become one-directional.
    pub fn narrow(&self, dir: Direction, trunc: i64) -> QSeries {
        let (dir, trunc) = match (self.dir, dir) {
            (Direction::Poly, d) => (d, trunc),
            (d, _) => (d, trunc.min(self.trunc)),
        };
        QSeries::from_terms(dir, trunc, self.terms())
    }

    /// The conjugate series `q -> q^-1`.
    pub fn bar(&self) -> QSeries {
        QSeries {
            dir: self.dir.flip(),
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, *c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> QSeries {
        let trunc = match self.dir {
            Direction::Down => self.trunc - k,
            Direction::Up => self.trunc + k,
            Direction::Poly => 0,
        };
        QSeries { dir: self.dir, coeffs: self.coeffs.iter().map(|(e, c)| (e + k, *c)).collect(), trunc }
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        let (dir, trunc) = combine_dirs(self, other)?;
        let mut out = QSeries::zero(dir, trunc);
        for (e, c) in self.terms().chain(other.terms()) {
            if out.knows(e) {
                *out.coeffs.entry(e).or_insert(0) += c;
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        combine_dirs(self, other)?;
        if self.dir == Direction::Up || other.dir == Direction::Up {
            return self.bar().mul(&other.bar()).map(|s| s.bar());
        }
        // Down or Poly from here on.
        let top = |s: &QSeries| -> Option<i64> {
            let m = s.coeffs.keys().next_back().copied();
            match s.dir {
                Direction::Poly => m,
                _ => Some(m.unwrap_or(i64::MIN).max(-s.trunc - 1)),
            }
        };
        let (tf, tg) = (top(self), top(other));
        if (self.dir == Direction::Poly && tf.is_none()) || (other.dir == Direction::Poly && tg.is_none()) {
            return Ok(QSeries::zero_poly());
        }
        let mut bound: Option<i64> = None;
        let mut tighten = |t: i64| bound = Some(bound.map_or(t, |b: i64| b.min(t)));
        if self.dir == Direction::Down {
            tighten(self.trunc);
            tighten(self.trunc - tg.unwrap());
        }
        if other.dir == Direction::Down {
            tighten(other.trunc);
            tighten(other.trunc - tf.unwrap());
        }
        let (dir, trunc) = match bound {
            None => (Direction::Poly, 0),
            Some(t) => (Direction::Down, t),
        };
        let mut out = QSeries::zero(dir, trunc);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                if out.knows(e1 + e2) {
                    *out.coeffs.entry(e1 + e2).or_insert(0) += c1 * c2;
                }
            }
        }
        Ok(out)
    }

    /// Coefficientwise comparison for exponents in `[-window, window]`.
    pub fn eq_window(&self, other: &QSeries, window: i64) -> Result<bool> {
        for s in [self, other] {
            if !s.knows(-window) || !s.knows(window) {
                return Err(Error::WindowExceedsKnowledge(format!("{s} on window {window}")));
            }
        }
        Ok((-window..=window).all(|e| self.coeffs.get(&e) == other.coeffs.get(&e)))
    }

    /// Coefficientwise comparison on the exponents in `[-window, window]`
    /// known to both series.
    pub fn eq_known(&self, other: &QSeries, window: i64) -> bool {
        (-window..=window)
            .filter(|e| self.knows(*e) && other.knows(*e))
            .all(|e| self.coeffs.get(&e) == other.coeffs.get(&e))
    }

    /// Largest `w` such that `[-w, w]` is known, capped at `cap`.
    pub fn known_window(&self, cap: i64) -> i64 {
        match self.dir {
            Direction::Poly => cap,
            _ => self.trunc.min(cap),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.coeffs.iter().rev().map(|(e, c)| json!([e, c])).collect();
        json!({
            "terms": terms,
            "direction": self.dir.name(),
            "window": self.trunc_order(),
        })
    }
}

fn combine_dirs(a: &QSeries, b: &QSeries) -> Result<(Direction, i64)> {
    use Direction::*;
    Ok(match (a.dir, b.dir) {
        (Poly, Poly) => (Poly, 0),
        (Poly, d) => (d, b.trunc),
        (d, Poly) => (d, a.trunc),
        (x, y) if x == y => (x, a.trunc.min(b.trunc)),
        _ => return Err(Error::IncompatibleDirections(format!("{} and {}", a.dir.name(), b.dir.name()))),
    })
}

fn fmt_term(e: i64, c: u64) -> String {
    match (e, c) {
        (0, c) => c.to_string(),
        (e, 1) => format!("q^{e}"),
        (e, c) => format!("{c}*q^{e}"),
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.coeffs.iter().rev().map(|(e, c)| fmt_term(*e, *c)).collect();
        let body = if body.is_empty() { "0".to_string() } else { body.join(" + ") };
        match self.dir {
            Direction::Poly => write!(f, "{body}"),
            Direction::Down => write!(f, "{body} (+O(q^{}))", -self.trunc - 1),
            Direction::Up => write!(f, "{body} (+O(q^{}))", self.trunc + 1),
        }
    }
}

/// Integer-coefficient Laurent polynomial, used only while peeling characters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedSeries {
    coeffs: BTreeMap<i64, i64>,
}

impl SignedSeries {
    pub fn from_series(s: &QSeries) -> SignedSeries {
        SignedSeries { coeffs: s.terms().map(|(e, c)| (e, c as i64)).collect() }
    }

    pub fn get(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: i64, c: i64) {
        let v = self.coeffs.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn sub(&self, other: &SignedSeries) -> SignedSeries {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, -c);
        }
        out
    }

    /// Converts back to a natural series, failing on a negative coefficient.
    pub fn to_natural(&self, dir: Direction, trunc: i64) -> Option<QSeries> {
        if self.coeffs.values().any(|c| *c < 0) {
            return None;
        }
        Some(QSeries::from_terms(dir, trunc, self.coeffs.iter().map(|(e, c)| (*e, *c as u64))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_down(t: i64) -> QSeries {
        QSeries::from_terms(Direction::Down, t, (0..=t).map(|k| (-(2 * k + 1), 1)))
    }

    #[test]
    fn add_is_coefficientwise() {
        let a = QSeries::from_terms(Direction::Poly, 0, [(0, 1), (-2, 1)]);
        let b = QSeries::monomial(-2, 1);
        assert_eq!(a.add(&b).unwrap().to_string(), "1 + 2*q^-2");
    }

    #[test]
    fn shift_by_monomial_keeps_window() {
        let g = odd_down(6);
        let p = QSeries::monomial(-1, 1).mul(&g).unwrap();
        assert_eq!(p.trunc_order(), Some(6));
        assert_eq!(p.to_string(), "q^-2 + q^-4 + q^-6 (+O(q^-7))");
    }

    #[test]
    fn unit_is_neutral() {
        let f = odd_down(7);
        assert_eq!(f.mul(&QSeries::one()).unwrap(), f);
    }

    #[test]
    fn bar_flips_direction() {
        let f = QSeries::from_terms(Direction::Up, 5, [(1, 1)]);
        let g = f.bar();
        assert_eq!(g.direction(), Direction::Down);
        assert_eq!(g.coeff(-1).unwrap(), 1);
        assert_eq!(QSeries::one().bar(), QSeries::one());
    }

    #[test]
    fn window_comparison() {
        let one = QSeries::one();
        assert!(one.eq_window(&one, 10).unwrap());
        let a = QSeries::from_terms(Direction::Poly, 0, [(0, 1), (-2, 1)]);
        assert!(!a.eq_window(&one, 10).unwrap());
        let geo = |t: i64| QSeries::from_terms(Direction::Down, t, (0..=t).map(|k| (-2 * k, 1)));
        assert!(geo(8).eq_window(&geo(12), 8).unwrap());
        assert!(geo(8).eq_window(&geo(12), 9).is_err());
    }

    #[test]
    fn unknown_coefficients_are_errors() {
        let f = odd_down(4);
        assert!(f.coeff(-5).is_err());
        assert_eq!(f.coeff(3).unwrap(), 0);
    }

    #[test]
    fn mixed_directions_rejected() {
        let d = odd_down(3);
        let u = d.bar();
        assert!(matches!(d.add(&u), Err(Error::IncompatibleDirections(_))));
        assert!(d.mul(&u).is_err());
    }

    #[test]
    fn rendering() {
        let s = QSeries::from_terms(Direction::Down, 6, [(0, 1), (-2, 2), (-4, 1)]);
        assert_eq!(s.to_string(), "1 + 2*q^-2 + q^-4 (+O(q^-7))");
        assert_eq!(s.to_json()["terms"], json!([[0, 1], [-2, 2], [-4, 1]]));
    }
}
