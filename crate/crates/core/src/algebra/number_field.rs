use std::fmt;
use std::sync::Arc;

use super::cbox::CBox;
use super::roots::{isolate_squarefree, is_irreducible, refine_root, refine_to};
use super::scalar::{Rational, Scalar};
use super::upoly::UPoly;
use super::AlgebraError;

/// `Q(θ)` for a root `θ` of an irreducible monic rational polynomial, pinned down by a
/// box containing exactly that root.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    minimal_polynomial: UPoly<Rational>,
    root_box: CBox,
}

impl NumberField {
    /// Checks irreducibility and that `root_box` isolates exactly one root.
    pub fn new(minimal_polynomial: UPoly<Rational>, root_box: CBox) -> Result<Self, AlgebraError> {
        let monic = minimal_polynomial.monic();
        if !is_irreducible(&monic) {
            return Err(AlgebraError::Reducible);
        }
        // Refine every root until it is either inside the box or clear of it.
        let mut roots = isolate_squarefree(&monic);
        let mut inside = 0;
        for b in roots.iter_mut() {
            let mut rounds = 0;
            loop {
                if root_box.contains_box(b) {
                    inside += 1;
                    break;
                }
                if !root_box.intersects(b) {
                    break;
                }
                rounds += 1;
                if rounds > 200 {
                    return Err(AlgebraError::AmbiguousBox);
                }
                *b = refine_root(&monic, b);
            }
        }
        if inside != 1 {
            return Err(AlgebraError::AmbiguousBox);
        }
        Ok(NumberField { minimal_polynomial: monic, root_box })
    }

    /// Trusted constructor for boxes produced by root isolation.
    pub(crate) fn from_isolated(minimal_polynomial: UPoly<Rational>, root_box: CBox) -> Self {
        NumberField { minimal_polynomial: minimal_polynomial.monic(), root_box }
    }

    pub fn minimal_polynomial(&self) -> &UPoly<Rational> {
        &self.minimal_polynomial
    }

    pub fn root_box(&self) -> &CBox {
        &self.root_box
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial.degree().unwrap()
    }

    pub fn generator(self: &Arc<Self>) -> FieldElement {
        FieldElement::new(self.clone(), vec![Rational::zero(), Rational::from_integer(1.into())])
    }

    /// Isolating box for the generator of size at most `size`.
    pub fn refined_box(&self, size: &Rational) -> CBox {
        refine_to(&self.minimal_polynomial, &self.root_box, size)
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({}) @ {}", self.minimal_polynomial, self.root_box)
    }
}

/// An element of the rationals or of a [`NumberField`], stored as the reduced
/// polynomial in the generator.
///
/// Elements without a field are rationals and combine with elements of any field.
#[derive(Clone)]
pub struct FieldElement {
    field: Option<Arc<NumberField>>,
    coords: Vec<Rational>,
}

impl FieldElement {
    pub fn rational(q: Rational) -> Self {
        let coords = if q.is_zero() { Vec::new() } else { vec![q] };
        FieldElement { field: None, coords }
    }

    pub fn new(field: Arc<NumberField>, coords: Vec<Rational>) -> Self {
        let reduced = UPoly::new(coords).rem(field.minimal_polynomial());
        FieldElement { field: Some(field), coords: reduced.coeffs().to_vec() }
    }

    fn from_poly(field: &Option<Arc<NumberField>>, p: UPoly<Rational>) -> Self {
        match field {
            None => FieldElement { field: None, coords: p.coeffs().to_vec() },
            Some(k) => FieldElement::new(k.clone(), p.coeffs().to_vec()),
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    fn poly(&self) -> UPoly<Rational> {
        UPoly::new(self.coords.clone())
    }

    /// The value as a rational, when it lies in the prime field.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coords.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coords[0].clone()),
            _ => None,
        }
    }

    fn joint_field(&self, other: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                assert!(Arc::ptr_eq(a, b) || a == b, "mixing elements of different number fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    /// Minimal polynomial over the rationals (monic).
    pub fn minimal_polynomial(&self) -> UPoly<Rational> {
        if let Some(q) = self.as_rational() {
            return UPoly::linear_root(q);
        }
        // First linear dependency among 1, a, a^2, ...
        let n = self.field.as_ref().unwrap().degree();
        let mut powers: Vec<FieldElement> = vec![FieldElement::one()];
        for k in 1..=n {
            powers.push(powers[k - 1].times(self));
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    powers
                        .iter()
                        .map(|p| p.coords.get(i).cloned().unwrap_or_else(Rational::zero))
                        .collect()
                })
                .collect();
            let kernel = super::linalg::kernel_basis(&rows);
            if let Some(v) = kernel.into_iter().next() {
                return UPoly::new(v).monic();
            }
        }
        unreachable!("an element of a degree-n field satisfies a polynomial of degree n")
    }

    /// Complex box containing the value, computed from a refinement of the generator box.
    pub fn enclosure(&self, generator_size: &Rational) -> CBox {
        match &self.field {
            None => CBox::real(self.as_rational().unwrap()),
            Some(k) => k.refined_box(generator_size).eval_poly(&self.coords),
        }
    }

    /// Minimal polynomial plus an isolating box for this value among its conjugates.
    pub fn to_algebraic(&self) -> AlgebraicNumber {
        let minpoly = self.minimal_polynomial();
        if let Some(q) = self.as_rational() {
            return AlgebraicNumber { minimal_polynomial: minpoly, root_box: CBox::real(q) };
        }
        let mut roots = isolate_squarefree(&minpoly);
        let mut size = Rational::new(1.into(), 16.into());
        loop {
            let enc = self.enclosure(&size);
            let hits: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].intersects(&enc)).collect();
            if hits.len() == 1 {
                return AlgebraicNumber { minimal_polynomial: minpoly, root_box: roots[hits[0]].clone() };
            }
            for &i in &hits {
                roots[i] = refine_root(&minpoly, &roots[i]);
            }
            size = size / Rational::from_integer(16.into());
        }
    }

    /// Decimal approximation (display only).
    pub fn approx(&self) -> (f64, f64) {
        self.enclosure(&Rational::new(1.into(), (1u64 << 40).into())).approx()
    }
}

impl Scalar for FieldElement {
    fn zero() -> Self {
        FieldElement { field: None, coords: Vec::new() }
    }
    fn one() -> Self {
        FieldElement::rational(Rational::from_integer(1.into()))
    }
    fn from_rational(q: Rational) -> Self {
        FieldElement::rational(q)
    }
    fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let field = self.joint_field(other);
        FieldElement { field, coords: self.poly().add(&other.poly()).coeffs().to_vec() }
    }
    fn minus(&self, other: &Self) -> Self {
        let field = self.joint_field(other);
        FieldElement { field, coords: self.poly().sub(&other.poly()).coeffs().to_vec() }
    }
    fn times(&self, other: &Self) -> Self {
        let field = self.joint_field(other);
        if self.coords.len() <= 1 || other.coords.len() <= 1 {
            return FieldElement { field, coords: self.poly().mul(&other.poly()).coeffs().to_vec() };
        }
        Self::from_poly(&field, self.poly().mul(&other.poly()))
    }
    fn negate(&self) -> Self {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(FieldElement { field: self.field.clone(), coords: vec![q.recip()] });
        }
        let k = self.field.as_ref().unwrap();
        let (g, s, _) = self.poly().extended_gcd(k.minimal_polynomial());
        debug_assert_eq!(g.degree(), Some(0));
        Some(FieldElement::new(k.clone(), s.coeffs().to_vec()))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.coords != other.coords {
            return false;
        }
        match (&self.field, &other.field) {
            (Some(a), Some(b)) if self.coords.len() > 1 => Arc::ptr_eq(a, b) || a == b,
            _ => true,
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{}", UPoly::new(self.coords.clone())),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => {
                let (re, im) = self.approx();
                if im.abs() < 1e-300 {
                    write!(f, "{re:.6}")
                } else if im < 0.0 {
                    write!(f, "{re:.6}-{:.6}i", -im)
                } else {
                    write!(f, "{re:.6}+{im:.6}i")
                }
            }
        }
    }
}

/// An algebraic number given by its minimal polynomial and an isolating box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    pub minimal_polynomial: UPoly<Rational>,
    pub root_box: CBox,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, isolate_squarefree, rat, refine_to};

    fn gaussian() -> Arc<NumberField> {
        let m = UPoly::from_ints(&[1, 0, 1]);
        let b = isolate_squarefree(&m).into_iter().find(|b| b.strictly_upper()).unwrap();
        Arc::new(NumberField::new(m, b).unwrap())
    }

    #[test]
    fn gaussian_arithmetic() {
        let k = gaussian();
        let i = k.generator();
        assert_eq!(i.times(&i), FieldElement::rational(int(-1)));
        let a = i.plus(&FieldElement::rational(int(1)));
        let inv = a.inverse().unwrap();
        assert!(a.times(&inv).is_one());
        // 1/(1+i) = (1-i)/2
        assert_eq!(inv, FieldElement::new(k.clone(), vec![rat(1, 2), rat(-1, 2)]));
    }

    #[test]
    fn minimal_polynomials_and_boxes() {
        let m = UPoly::from_ints(&[-2, 0, 1]);
        let b = isolate_squarefree(&m)
            .into_iter()
            .map(|b| refine_to(&m, &b, &rat(1, 10)))
            .find(|b| b.re.lo > int(0))
            .unwrap();
        let k = Arc::new(NumberField::new(m, b).unwrap());
        let s = k.generator();
        let x = s.plus(&FieldElement::rational(int(1)));
        // (sqrt2 + 1) satisfies t^2 - 2t - 1
        assert_eq!(x.minimal_polynomial(), UPoly::from_ints(&[-1, -2, 1]));
        let alg = x.to_algebraic();
        assert!(alg.root_box.re.contains(&rat(24142, 10000)));
        assert!(!alg.root_box.re.contains(&rat(-4142, 10000)));
        let (re, _) = x.approx();
        assert!((re - 2.414213562).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_fields() {
        let m = UPoly::from_ints(&[-4, 0, 1]);
        let b = CBox::real(int(2));
        assert_eq!(NumberField::new(m, b), Err(AlgebraError::Reducible));
        let m = UPoly::from_ints(&[-2, 0, 1]);
        let wide = CBox::new(
            crate::algebra::Interval::new(int(-2), int(2)),
            crate::algebra::Interval::new(int(-1), int(1)),
        );
        assert_eq!(NumberField::new(m, wide), Err(AlgebraError::AmbiguousBox));
    }
}
