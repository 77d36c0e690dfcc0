//! Sparse polynomials in `x, y, z`, homogeneous forms, and bivariate local polynomials.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{Rational, Scalar};

/// Exponents of `x, y, z`.
pub type Monomial = [u32; 3];

pub const VARIABLES: [&str; 3] = ["x", "y", "z"];

/// All monomials of total degree `t`.
///
/// Order: decreasing power of `x`, then decreasing power of `y`, so
/// `x^t, x^(t-1) y, x^(t-1) z, x^(t-2) y^2, ...`. [`monomial_index`] inverts it.
pub fn monomial_basis(t: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(((t + 1) * (t + 2) / 2) as usize);
    for i in (0..=t).rev() {
        for j in (0..=t - i).rev() {
            out.push([i, j, t - i - j]);
        }
    }
    out
}

/// Position of `m` in `monomial_basis(deg(m))`.
pub fn monomial_index(m: &Monomial) -> usize {
    let t = m[0] + m[1] + m[2];
    let a = (t - m[0]) as usize;
    a * (a + 1) / 2 + (a - m[1] as usize)
}

pub fn monomial_count(t: u32) -> usize {
    ((t + 1) * (t + 2) / 2) as usize
}

fn monomial_string(m: &Monomial) -> String {
    let parts: Vec<String> = (0..3)
        .filter(|&v| m[v] > 0)
        .map(|v| if m[v] == 1 { VARIABLES[v].to_string() } else { format!("{}^{}", VARIABLES[v], m[v]) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Sparse polynomial in `x, y, z`; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> MPoly<C> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(v: usize) -> Self {
        let mut m = [0, 0, 0];
        m[v] = 1;
        Self::monomial(m, C::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.plus(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m[0] + m[1] + m[2]).max()
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[v]).max()
    }

    /// `Some(d)` if every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m[0] + m[1] + m[2]);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &c.negate());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.negate())).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.times(s))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term([ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]], &ca.times(cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| ([a[0] + m[0], a[1] + m[1], a[2] + m[2]], c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(C::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[v] == 0 {
                continue;
            }
            let mut e = *m;
            e[v] -= 1;
            out.add_term(e, &c.times(&C::from_int(m[v] as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[C; 3]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..3 {
                for _ in 0..m[v] {
                    t = t.times(&point[v]);
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Coefficients as a polynomial in variable `v`: entry `i` multiplies `v^i`.
    pub fn coefficients_in(&self, v: usize) -> Vec<Self> {
        let n = self.degree_in(v).map_or(0, |d| d as usize + 1);
        let mut out = vec![Self::zero(); n];
        for (m, c) in &self.terms {
            let mut e = *m;
            e[v] = 0;
            out[m[v] as usize].add_term(e, c);
        }
        out
    }

    /// Substitute polynomials for the three variables.
    pub fn compose(&self, subs: &[MPoly<C>; 3]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for v in 0..3 {
                t = t.mul(&subs[v].pow(m[v]));
            }
            out = out.add(&t);
        }
        out
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = monomial_string(m);
            let coeff = format!("{c}");
            let (sign, body) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if n == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono == "1" {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (monomial_string(m), c))).finish()
    }
}

/// A homogeneous polynomial of fixed degree in `x, y, z`.
#[derive(Clone, PartialEq)]
pub struct HomogeneousForm<C> {
    degree: u32,
    poly: MPoly<C>,
}

impl<C: Scalar> HomogeneousForm<C> {
    /// `None` if some term has the wrong degree.
    pub fn new(degree: u32, poly: MPoly<C>) -> Option<Self> {
        poly.terms
            .keys()
            .all(|m| m[0] + m[1] + m[2] == degree)
            .then_some(HomogeneousForm { degree, poly })
    }

    pub fn zero(degree: u32) -> Self {
        HomogeneousForm { degree, poly: MPoly::zero() }
    }

    /// Infer the degree from the terms; `None` for zero or inhomogeneous input.
    pub fn from_poly(poly: MPoly<C>) -> Option<Self> {
        let degree = poly.homogeneous_degree()?;
        Some(HomogeneousForm { degree, poly })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MPoly<C> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.poly.coeff(m)
    }

    /// Partial derivative; the degree drops by one (the result may be zero).
    pub fn derivative(&self, v: usize) -> Self {
        assert!(self.degree >= 1, "derivative of a constant form");
        HomogeneousForm { degree: self.degree - 1, poly: self.poly.derivative(v) }
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.derivative(0), self.derivative(1), self.derivative(2)]
    }

    pub fn mul(&self, other: &Self) -> Self {
        HomogeneousForm { degree: self.degree + other.degree, poly: self.poly.mul(&other.poly) }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        HomogeneousForm { degree: self.degree, poly: self.poly.add(&other.poly) }
    }

    pub fn scale(&self, s: &C) -> Self {
        HomogeneousForm { degree: self.degree, poly: self.poly.scale(s) }
    }

    pub fn eval(&self, p: &[C; 3]) -> C {
        self.poly.eval(p)
    }

    /// Dense coefficient vector in [`monomial_basis`] order.
    pub fn dense(&self) -> Vec<C> {
        let mut out = vec![C::zero(); monomial_count(self.degree)];
        for (m, c) in self.poly.terms() {
            out[monomial_index(m)] = c.clone();
        }
        out
    }

    pub fn from_dense(degree: u32, coeffs: &[C]) -> Self {
        let poly = MPoly::from_terms(monomial_basis(degree).into_iter().zip(coeffs.iter().cloned()));
        HomogeneousForm { degree, poly }
    }

    /// `f(T x)` for a 3x3 matrix `T` (rows give the new expressions for x, y, z).
    pub fn transform(&self, t: &[[C; 3]; 3]) -> Self {
        let subs: [MPoly<C>; 3] = std::array::from_fn(|r| {
            MPoly::from_terms((0..3).map(|c| {
                let mut m = [0, 0, 0];
                m[c] = 1;
                (m, t[r][c].clone())
            }))
        });
        HomogeneousForm { degree: self.degree, poly: self.poly.compose(&subs) }
    }

    /// The local equation at a point: set coordinate `chart` to 1 and shift the other two
    /// coordinates (in increasing index order) by `at`, so the point becomes the origin.
    pub fn localize(&self, chart: usize, at: [&C; 2]) -> AffinePolynomial<C> {
        let others: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
        let d = self.degree as usize;
        // powers[k][e] = (X_k + a_k)^e as a dense univariate polynomial
        let expand = |a: &C| -> Vec<Vec<C>> {
            let mut table = vec![vec![C::one()]];
            for e in 1..=d {
                let prev = &table[e - 1];
                let mut next = vec![C::zero(); e + 1];
                for (i, c) in prev.iter().enumerate() {
                    next[i + 1] = next[i + 1].plus(c);
                    next[i] = next[i].plus(&c.times(a));
                }
                table.push(next);
            }
            table
        };
        let px = expand(at[0]);
        let py = expand(at[1]);
        let mut out = AffinePolynomial::zero();
        for (m, c) in self.poly.terms() {
            let ex = &px[m[others[0]] as usize];
            let ey = &py[m[others[1]] as usize];
            for (i, a) in ex.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let ca = c.times(a);
                for (j, b) in ey.iter().enumerate() {
                    if !b.is_zero() {
                        out.add_term([i as u32, j as u32], &ca.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> HomogeneousForm<D> {
        HomogeneousForm { degree: self.degree, poly: self.poly.map(f) }
    }

    /// `{"x^2*y": coefficient, ...}` with coefficients rendered by `render`.
    pub fn coefficient_map(&self, render: impl Fn(&C) -> String) -> BTreeMap<String, String> {
        self.poly.terms().iter().map(|(m, c)| (monomial_string(m), render(c))).collect()
    }
}

impl HomogeneousForm<Rational> {
    pub fn to_field(&self) -> HomogeneousForm<super::FieldElement> {
        self.map(|c| super::FieldElement::rational(c.clone()))
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for HomogeneousForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl<C: fmt::Debug> fmt::Debug for HomogeneousForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} {:?}", self.degree, self.poly)
    }
}

/// Sparse polynomial in two local coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct AffinePolynomial<C> {
    terms: BTreeMap<[u32; 2], C>,
}

impl<C: Scalar> AffinePolynomial<C> {
    pub fn zero() -> Self {
        AffinePolynomial { terms: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; 2], C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 2], C> {
        &self.terms
    }

    pub fn add_term(&mut self, m: [u32; 2], c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.plus(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn coeff(&self, m: [u32; 2]) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff([0, 0])
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[v] == 0 {
                continue;
            }
            let mut e = *m;
            e[v] -= 1;
            out.add_term(e, &c.times(&C::from_int(m[v] as i64)));
        }
        out
    }

    /// Lowest total degree of a term (`None` for zero).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m[0] + m[1]).min()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
