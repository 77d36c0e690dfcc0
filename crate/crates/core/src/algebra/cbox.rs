//! Rectangular complex intervals with rational corners.

use std::fmt;

use num_traits::{Signed, Zero};

use super::scalar::{int, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let products = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Integers inside the interval, capped at `limit + 1` entries.
    pub fn integers(&self, limit: usize) -> Vec<num_bigint::BigInt> {
        let first = self.lo.ceil().to_integer();
        let last = self.hi.floor().to_integer();
        let mut out = Vec::new();
        let mut k = first;
        while k <= last && out.len() <= limit {
            out.push(k.clone());
            k += 1;
        }
        out
    }
}

/// Closed rectangle `[re.lo, re.hi] x [im.lo, im.hi]` in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CBox {
    pub re: Interval,
    pub im: Interval,
}

impl CBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        CBox { re, im }
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        CBox { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn real(x: Rational) -> Self {
        Self::point(x, Rational::zero())
    }

    pub fn is_real(&self) -> bool {
        self.im.lo.is_zero() && self.im.hi.is_zero()
    }

    /// Largest side length.
    pub fn size(&self) -> Rational {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn conjugate(&self) -> CBox {
        CBox { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn intersects(&self, other: &CBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn contains_box(&self, other: &CBox) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn add(&self, o: &CBox) -> CBox {
        CBox { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CBox) -> CBox {
        CBox { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &CBox) -> CBox {
        CBox {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, c: &Rational) -> CBox {
        CBox { re: self.re.scale(c), im: self.im.scale(c) }
    }

    /// Horner evaluation of a rational polynomial (ascending coefficients).
    pub fn eval_poly(&self, coeffs: &[Rational]) -> CBox {
        let mut acc = CBox::real(Rational::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&CBox::real(c.clone()));
        }
        acc
    }

    pub fn center(&self) -> (Rational, Rational) {
        (self.re.mid(), self.im.mid())
    }

    pub fn approx(&self) -> (f64, f64) {
        let (re, im) = self.center();
        (to_f64(&re), to_f64(&im))
    }

    pub fn corners(&self) -> [Rational; 4] {
        [self.re.lo.clone(), self.re.hi.clone(), self.im.lo.clone(), self.im.hi.clone()]
    }

    /// True when the box lies strictly inside the upper half plane.
    pub fn strictly_upper(&self) -> bool {
        self.im.lo.is_positive()
    }
}

impl fmt::Display for CBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.approx();
        if self.is_real() {
            write!(f, "{re:.6}")
        } else if im < 0.0 {
            write!(f, "{re:.6}-{:.6}i", -im)
        } else {
            write!(f, "{re:.6}+{im:.6}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn interval_product_signs() {
        let a = Interval::new(rat(-1, 1), rat(2, 1));
        let b = Interval::new(rat(-3, 1), rat(1, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-6, 1));
        assert_eq!(p.hi, rat(3, 1));
    }

    #[test]
    fn box_contains_exact_product() {
        // (1+i)^2 = 2i
        let z = CBox::point(rat(1, 1), rat(1, 1));
        let sq = z.mul(&z);
        assert!(sq.re.contains(&rat(0, 1)));
        assert!(sq.im.contains(&rat(2, 1)));
    }
}
