//! Certified isolation of the complex roots of rational polynomials, and factorization
//! of square-free rational polynomials into irreducibles.
//!
//! Real roots are isolated by Descartes' rule of signs with bisection; each real root gets
//! a degenerate box `[lo, hi] x [0, 0]` whose endpoints are not roots. Non-real roots are
//! approximated numerically and then certified: for a polynomial of degree `n` and any
//! `z`, some root lies within `n |f(z) / f'(z)|` of `z`. Disjoint boxes in the upper half
//! plane, one per expected non-real root pair, therefore each hold exactly one root.
//! Stored complex boxes are `z ± 4ρ` with the root inside `z ± ρ`, which keeps Newton
//! refinement inside the original box.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;

use super::cbox::{CBox, Interval};
use super::number_field::NumberField;
use super::scalar::{int, round_dyadic, sqrt_upper, to_f64, Rational, Scalar};
use super::upoly::UPoly;

/// One root of a polynomial, as returned by [`isolate_roots`].
#[derive(Clone, Debug, PartialEq)]
pub enum RootDescriptor {
    Rational(Rational),
    /// An irrational root; the field is generated by it.
    Algebraic(Arc<NumberField>),
}

/// All roots of a nonzero rational polynomial with multiplicities.
///
/// The input is split by square-free decomposition, then each part is factored over the
/// rationals. Linear factors give exact rational roots; every other irreducible factor
/// yields one number field per root, with a certified isolating box. Multiplicities sum
/// to the degree.
pub fn isolate_roots(u: &UPoly<Rational>) -> Vec<(RootDescriptor, usize)> {
    assert!(!u.is_zero(), "isolate_roots needs a nonzero polynomial");
    let mut found: Vec<(UPoly<Rational>, CBox, usize)> = Vec::new();
    for (idx, part) in u.squarefree_decomposition().iter().enumerate() {
        if part.degree() == Some(0) {
            continue;
        }
        for (factor, boxes) in factor_squarefree(part) {
            if factor.degree() == Some(1) {
                let root = CBox::real(factor.coeff(0).negate());
                found.push((factor, root, idx + 1));
            } else {
                found.extend(boxes.into_iter().map(|b| (factor.clone(), b, idx + 1)));
            }
        }
    }
    // Boxes from different factors were isolated separately and may still overlap.
    loop {
        let clash = (0..found.len())
            .flat_map(|i| (i + 1..found.len()).map(move |j| (i, j)))
            .find(|&(i, j)| found[i].1.intersects(&found[j].1));
        let Some((i, j)) = clash else { break };
        for k in [i, j] {
            let (f, b, _) = &found[k];
            let refined = refine_root(f, b);
            found[k].1 = refined;
        }
    }
    found
        .into_iter()
        .map(|(factor, b, mult)| {
            if factor.degree() == Some(1) {
                (RootDescriptor::Rational(factor.coeff(0).negate()), mult)
            } else {
                (RootDescriptor::Algebraic(Arc::new(NumberField::from_isolated(factor, b))), mult)
            }
        })
        .collect()
}

/// Isolating boxes for every complex root of a square-free polynomial: real roots in
/// increasing order, followed by conjugate pairs (upper root first).
pub fn isolate_squarefree(f: &UPoly<Rational>) -> Vec<CBox> {
    let n = f.degree().expect("nonzero polynomial");
    if n == 0 {
        return Vec::new();
    }
    let mut out = real_roots(f);
    let nonreal = n - out.len();
    debug_assert!(nonreal % 2 == 0);
    if nonreal > 0 {
        let upper = certify_upper_roots(f, nonreal / 2);
        for b in upper {
            let lower = b.conjugate();
            out.push(b);
            out.push(lower);
        }
    }
    out
}

fn cauchy_bound(f: &UPoly<Rational>) -> Rational {
    let lc = f.leading().unwrap().abs();
    let max = f.coeffs()[..f.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rational::zero);
    max + Rational::one()
}

/// Upper bound on the number of roots in the open interval `(a, b)` with the right parity.
fn descartes_count(f: &UPoly<Rational>, a: &Rational, b: &Rational) -> usize {
    let g = f.affine_substitute(a, &(b - a));
    let h = g.reversed();
    h.affine_substitute(&Rational::one(), &Rational::one()).sign_variations()
}

/// A point near the middle of `(a, b)` where `f` does not vanish.
fn split_point(f: &UPoly<Rational>, a: &Rational, b: &Rational) -> Rational {
    let w = b - a;
    let mut k: i64 = 2;
    loop {
        // midpoint, then points drifting away from it
        let offset = &w * Rational::new(BigInt::from(1), BigInt::from(k * k + 1));
        for cand in [(a + b) / int(2), (a + b) / int(2) + &offset, (a + b) / int(2) - &offset] {
            if !f.eval(&cand).is_zero() && &cand > a && &cand < b {
                return cand;
            }
        }
        k += 1;
    }
}

fn real_roots(f: &UPoly<Rational>) -> Vec<CBox> {
    let b = cauchy_bound(f);
    let mut stack = vec![(-b.clone(), b)];
    let mut found = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        match descartes_count(f, &lo, &hi) {
            0 => {}
            1 => found.push(Interval::new(lo, hi)),
            _ => {
                let m = split_point(f, &lo, &hi);
                stack.push((lo, m.clone()));
                stack.push((m, hi));
            }
        }
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    found
        .into_iter()
        .map(|iv| CBox::new(tighten(f, iv), Interval::point(Rational::zero())))
        .collect()
}

/// Pull both endpoints inward so neighbouring intervals no longer touch, keeping the sign
/// change (and hence the root) inside.
fn tighten(f: &UPoly<Rational>, iv: Interval) -> Interval {
    let w = iv.width();
    let lo_sign = f.eval(&iv.lo).is_positive();
    let hi_sign = f.eval(&iv.hi).is_positive();
    let mut k = 4;
    loop {
        let step = &w / int(k);
        let lo = &iv.lo + &step;
        let hi = &iv.hi - &step;
        let flo = f.eval(&lo);
        let fhi = f.eval(&hi);
        if !flo.is_zero() && !fhi.is_zero() && flo.is_positive() == lo_sign && fhi.is_positive() == hi_sign {
            return Interval::new(lo, hi);
        }
        k *= 2;
    }
}

#[derive(Clone, Debug)]
struct CRat {
    re: Rational,
    im: Rational,
}

impl CRat {
    fn add(&self, o: &CRat) -> CRat {
        CRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &CRat) -> CRat {
        CRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &CRat) -> CRat {
        let n = o.norm_sqr();
        let conj = CRat { re: o.re.clone(), im: -&o.im };
        let p = self.mul(&conj);
        CRat { re: p.re / &n, im: p.im / n }
    }
    fn eval(coeffs: &[Rational], z: &CRat) -> CRat {
        let mut acc = CRat { re: Rational::zero(), im: Rational::zero() };
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(&CRat { re: c.clone(), im: Rational::zero() });
        }
        acc
    }
    fn round(&self, bits: u32) -> CRat {
        CRat { re: round_dyadic(&self.re, bits), im: round_dyadic(&self.im, bits) }
    }
}

/// Upper bound on the distance from `z` to the nearest root of `f`; `None` if `f'(z) = 0`.
fn inclusion_radius(f: &UPoly<Rational>, fp: &UPoly<Rational>, z: &CRat) -> Option<Rational> {
    let n = f.degree().unwrap() as i64;
    let v = CRat::eval(f.coeffs(), z).norm_sqr();
    let d = CRat::eval(fp.coeffs(), z).norm_sqr();
    if d.is_zero() {
        return None;
    }
    Some(sqrt_upper(&(v * int(n * n) / d)))
}

fn newton_step(f: &UPoly<Rational>, fp: &UPoly<Rational>, z: &CRat, bits: u32) -> CRat {
    let d = CRat::eval(fp.coeffs(), z);
    if d.norm_sqr().is_zero() {
        return z.clone();
    }
    z.sub(&CRat::eval(f.coeffs(), z).div(&d)).round(bits)
}

fn boxed(z: &CRat, rho: &Rational) -> CBox {
    let r = rho * int(4);
    CBox::new(
        Interval::new(&z.re - &r, &z.re + &r),
        Interval::new(&z.im - &r, &z.im + &r),
    )
}

fn durand_kerner(f: &UPoly<Rational>, seed: f64) -> Vec<Complex64> {
    let lc = to_f64(f.leading().unwrap());
    let c: Vec<Complex64> = f.coeffs().iter().map(|q| Complex64::new(to_f64(q) / lc, 0.0)).collect();
    let n = c.len() - 1;
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let start = Complex64::new(0.4, 0.9 + seed);
    let mut z: Vec<Complex64> = (0..n)
        .map(|i| start.powu(i as u32 + 1) * (bound / 2.0).max(1.0))
        .collect();
    let eval = |x: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 1e-12);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    z
}

fn certify_upper_roots(f: &UPoly<Rational>, count: usize) -> Vec<CBox> {
    let fp = f.derivative();
    for attempt in 0..8 {
        let mut approx = durand_kerner(f, attempt as f64 * 0.137);
        approx.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal));
        let mut zs: Vec<CRat> = approx[..count]
            .iter()
            .map(|z| CRat {
                re: round_dyadic(&Rational::from_float(z.re).unwrap_or_default(), 52),
                im: round_dyadic(&Rational::from_float(z.im).unwrap_or_default(), 52),
            })
            .collect();
        let mut bits = 60;
        for _ in 0..12 {
            if let Some(boxes) = try_certify(f, &fp, &zs) {
                return boxes;
            }
            bits *= 2;
            zs = zs.iter().map(|z| newton_step(f, &fp, z, bits)).collect();
        }
    }
    panic!("failed to certify complex roots of {f:?}");
}

fn try_certify(f: &UPoly<Rational>, fp: &UPoly<Rational>, zs: &[CRat]) -> Option<Vec<CBox>> {
    let mut boxes = Vec::with_capacity(zs.len());
    for z in zs {
        let rho = inclusion_radius(f, fp, z)?;
        let b = boxed(z, &rho);
        if !b.strictly_upper() {
            return None;
        }
        boxes.push(b);
    }
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            if boxes[i].intersects(&boxes[j]) {
                return None;
            }
        }
    }
    Some(boxes)
}

/// A box for the same root at most half the size (or exact, for a rational real root).
pub fn refine_root(f: &UPoly<Rational>, b: &CBox) -> CBox {
    if b.size().is_zero() {
        return b.clone();
    }
    if b.is_real() {
        let (lo, hi) = (&b.re.lo, &b.re.hi);
        let m = (lo + hi) / int(2);
        let fm = f.eval(&m);
        if fm.is_zero() {
            return CBox::real(m);
        }
        let flo = f.eval(lo);
        let iv = if flo.is_positive() != fm.is_positive() {
            Interval::new(lo.clone(), m)
        } else {
            Interval::new(m, hi.clone())
        };
        return CBox::new(iv, Interval::point(Rational::zero()));
    }
    let fp = f.derivative();
    let target = b.size() / int(2);
    let (re, im) = b.center();
    let mut z = CRat { re, im };
    let size_bits = to_f64(&b.size()).log2().abs() as u32;
    let mut bits = 2 * size_bits + 40;
    for _ in 0..40 {
        z = newton_step(f, &fp, &z, bits);
        if let Some(rho) = inclusion_radius(f, &fp, &z) {
            let nb = boxed(&z, &rho);
            if b.contains_box(&nb) && nb.size() <= target {
                return nb;
            }
        }
        bits += 16;
    }
    panic!("Newton refinement left the isolating box for {f:?}");
}

/// Refine until the box size is at most `size`.
pub fn refine_to(f: &UPoly<Rational>, b: &CBox, size: &Rational) -> CBox {
    let mut cur = b.clone();
    while &cur.size() > size {
        cur = refine_root(f, &cur);
    }
    cur
}

/// Irreducible monic factors of a square-free rational polynomial, each with the
/// isolating boxes of its roots.
pub fn factor_squarefree(f: &UPoly<Rational>) -> Vec<(UPoly<Rational>, Vec<CBox>)> {
    let f = f.monic();
    let Some(n) = f.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![(f.clone(), isolate_squarefree(&f))];
    }
    let roots = isolate_squarefree(&f);
    let lc = f.primitive_integer().last().cloned().unwrap();
    let mut remaining: Vec<CBox> = roots;
    let mut rest = f.clone();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let (factor, idx) = smallest_factor_through_first(&rest, &lc, &mut remaining);
        let boxes: Vec<CBox> = idx.iter().map(|&i| remaining[i].clone()).collect();
        let mut keep = Vec::new();
        for (i, b) in remaining.into_iter().enumerate() {
            if !idx.contains(&i) {
                keep.push(b);
            }
        }
        remaining = keep;
        rest = rest.exact_div(&factor).expect("factor divides");
        out.push((factor, boxes));
    }
    out
}

fn combinations(n: usize, k: usize, first: usize) -> Vec<Vec<usize>> {
    // subsets of {0..n} of size k that contain `first`
    let others: Vec<usize> = (0..n).filter(|&i| i != first).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(others: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..others.len() {
            cur.push(others[i]);
            rec(others, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(&others, k - 1, 0, &mut cur, &mut out);
    for s in out.iter_mut() {
        s.push(first);
        s.sort_unstable();
    }
    out
}

enum Candidate {
    Factor(UPoly<Rational>),
    NotFactor,
    Undecided,
}

/// Decide whether the roots in `subset` are exactly the roots of a rational factor of `f`.
///
/// With `a` the leading coefficient of the primitive integer form of `f`, every `a * r` is
/// an algebraic integer, so a rational factor `prod (x - r)` has `prod (x - a r)` in `Z[x]`.
fn test_subset(f: &UPoly<Rational>, a: &BigInt, boxes: &[&CBox]) -> Candidate {
    let a_q = Rational::from_integer(a.clone());
    let mut poly = vec![CBox::real(Rational::one())];
    for b in boxes {
        let root = b.scale(&a_q);
        let mut next = vec![CBox::real(Rational::zero()); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&root));
        }
        poly = next;
    }
    let mut ints = Vec::with_capacity(poly.len());
    let mut decided = true;
    for c in &poly {
        if !c.im.contains(&Rational::zero()) {
            return Candidate::NotFactor;
        }
        let cands = c.re.integers(1);
        match cands.len() {
            0 => return Candidate::NotFactor,
            1 => ints.push(cands[0].clone()),
            _ => {
                decided = false;
                ints.push(BigInt::default());
            }
        }
    }
    if !decided {
        return Candidate::Undecided;
    }
    // g(x) = h(a x) / a^s
    let s = boxes.len() as u32;
    let coeffs: Vec<Rational> = ints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Rational::from_integer(c.clone()) * num_traits::pow(a_q.clone(), i) / num_traits::pow(a_q.clone(), s as usize)
        })
        .collect();
    let g = UPoly::new(coeffs);
    match f.exact_div(&g) {
        Some(_) => Candidate::Factor(g),
        None => Candidate::Undecided,
    }
}

fn smallest_factor_through_first(
    f: &UPoly<Rational>,
    a: &BigInt,
    roots: &mut [CBox],
) -> (UPoly<Rational>, Vec<usize>) {
    let n = roots.len();
    for k in 1..n {
        for subset in combinations(n, k, 0) {
            loop {
                let boxes: Vec<&CBox> = subset.iter().map(|&i| &roots[i]).collect();
                match test_subset(f, a, &boxes) {
                    Candidate::Factor(g) => return (g, subset),
                    Candidate::NotFactor => break,
                    Candidate::Undecided => {
                        for &i in &subset {
                            roots[i] = refine_root(f, &roots[i]);
                        }
                    }
                }
            }
        }
    }
    (f.monic(), (0..n).collect())
}

/// True when `f` is irreducible over the rationals.
pub fn is_irreducible(f: &UPoly<Rational>) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => f.is_squarefree() && factor_squarefree(f).len() == 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn p(c: &[i64]) -> UPoly<Rational> {
        UPoly::from_ints(c)
    }

    #[test]
    fn real_and_complex_isolation() {
        // (x^2 - 2)(x^2 + 1)
        let f = p(&[-2, 0, 1]).mul(&p(&[1, 0, 1]));
        let boxes = isolate_squarefree(&f);
        assert_eq!(boxes.len(), 4);
        assert!(boxes[0].is_real() && boxes[1].is_real());
        let lo = refine_to(&f, &boxes[0], &rat(1, 1000));
        let hi = refine_to(&f, &boxes[1], &rat(1, 1000));
        assert!(lo.re.contains(&rat(-14142, 10000)) || lo.re.contains(&rat(-14143, 10000)));
        assert!(hi.re.contains(&rat(14142, 10000)) || hi.re.contains(&rat(14143, 10000)));
        assert!(boxes[2].im.contains(&rat(1, 1)));
        assert!(boxes[3].im.contains(&rat(-1, 1)));
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(!boxes[i].intersects(&boxes[j]));
            }
        }
    }

    #[test]
    fn refinement_shrinks() {
        let f = p(&[1, 0, 1]);
        let b = isolate_squarefree(&f)[0].clone();
        let r = refine_to(&f, &b, &rat(1, 1 << 20));
        assert!(r.size() <= rat(1, 1 << 20));
        assert!(r.im.contains(&rat(1, 1)));
        assert!(b.contains_box(&r));
    }

    #[test]
    fn factor_quartic_into_quadratics() {
        // (x^2 + 1)(x^2 - 3) and (x^2+x+1)(x^2+2)
        let f = p(&[1, 0, 1]).mul(&p(&[-3, 0, 1]));
        let mut fs: Vec<_> = factor_squarefree(&f).into_iter().map(|(g, _)| g).collect();
        fs.sort_by_key(|g| g.coeff(0));
        assert_eq!(fs, vec![p(&[-3, 0, 1]), p(&[1, 0, 1])]);
        let f = p(&[1, 1, 1]).mul(&p(&[2, 0, 1]));
        assert_eq!(factor_squarefree(&f).len(), 2);
    }

    #[test]
    fn rational_roots_with_leading_coefficient() {
        // (2x - 1)(3x + 2)(x^2 + x + 1)
        let f = p(&[-1, 2]).mul(&p(&[2, 3])).mul(&p(&[1, 1, 1]));
        let fs = factor_squarefree(&f);
        let linear: Vec<_> = fs.iter().filter(|(g, _)| g.degree() == Some(1)).collect();
        assert_eq!(linear.len(), 2);
        assert!(fs.iter().any(|(g, _)| *g == p(&[1, 1, 1])));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&p(&[-2, 0, 1])));
        assert!(is_irreducible(&p(&[-2, 0, 0, 1])));
        assert!(!is_irreducible(&p(&[-4, 0, 1])));
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        assert!(!is_irreducible(&p(&[4, 0, 0, 0, 1])));
        // x^4 - 10x^2 + 1, minimal polynomial of sqrt2 + sqrt3
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])));
    }

    #[test]
    fn isolate_roots_examples() {
        let roots = isolate_roots(&p(&[0, 0, 0, 0, 1]));
        assert_eq!(roots, vec![(RootDescriptor::Rational(rat(0, 1)), 4)]);

        let roots = isolate_roots(&p(&[-2, 0, 1]));
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|(r, m)| *m == 1 && matches!(r, RootDescriptor::Algebraic(_))));

        // (y-1)^2 (y^2+1)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[1, 0, 1]));
        let roots = isolate_roots(&f);
        assert_eq!(roots.iter().map(|(_, m)| m).sum::<usize>(), 4);
        assert!(roots.contains(&(RootDescriptor::Rational(rat(1, 1)), 2)));
        let complex: Vec<_> = roots
            .iter()
            .filter_map(|(r, m)| match r {
                RootDescriptor::Algebraic(k) => Some((k.clone(), *m)),
                _ => None,
            })
            .collect();
        assert_eq!(complex.len(), 2);
        assert!(complex.iter().all(|(k, m)| *m == 1 && *k.minimal_polynomial() == p(&[1, 0, 1])));
    }
}
