//! Sparse multivariate polynomials over ℚ(i) in a set of atoms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use super::{Coeff, Expr, Func, Symbol};

/// An indeterminate of the polynomial ring: a symbol, or an elementary
/// function applied to a canonical argument. Symbols order before function
/// atoms and by name among themselves.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Sym(Symbol),
    Apply(Func, Expr),
}

impl Atom {
    pub fn to_expr(&self) -> Expr {
        match self {
            Atom::Sym(s) => Expr::symbol(s),
            Atom::Apply(f, a) => Expr::apply(*f, a.clone()),
        }
    }
}

/// Power product of atoms, kept sorted by atom with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn atom(a: Atom, exp: u32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            Self(vec![(a, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.0.binary_search_by(|(x, _)| x.cmp(a)).map(|i| self.0[i].1).unwrap_or(0)
    }

    /// Splits off the power of `a`.
    pub fn split(&self, a: &Atom) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for (x, e) in &self.0 {
            if x == a {
                exp = *e;
            } else {
                rest.push((x.clone(), *e));
            }
        }
        (exp, Monomial(rest))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *a {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *a {
                let d = e.checked_sub(other.0[j].1)?;
                if d > 0 {
                    out.push((a.clone(), d));
                }
                j += 1;
            } else {
                out.push((a.clone(), *e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Lexicographic comparison with earlier atoms more significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((x, ex)), Some((y, ey))) => match x.cmp(y) {
                    Ordering::Equal => {
                        if ex != ey {
                            return ex.cmp(ey);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }

    /// Graded lexicographic order.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.lex_cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_atom(a: Atom) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::atom(a, 1), Coeff::one());
        p
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value, when the polynomial has no atoms.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(a, _)| a.clone())).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &Coeff) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, k: &Coeff) -> Poly {
        let mut out = Poly::zero();
        for (n, c) in &self.terms {
            out.add_term(n.mul(m), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &other.terms {
            for (n, d) in &self.terms {
                out.add_term(n.mul(m), d * c);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading term in graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(a)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `a`: `self = Σ_k c_k · a^k`.
    pub fn coeffs_in(&self, a: &Atom) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.split(a);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. A single polynomial is a Gröbner basis of the ideal it
    /// generates, so leading-term reduction decides divisibility.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc_inv) = (lm.clone(), lc.inv().unwrap());
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.inv().unwrap()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let t = m.div(&lm)?;
            let k = c * &lc_inv;
            rem = rem.sub(&divisor.mul_monomial(&t, &k));
            quot.add_term(t, k);
        }
        Some(quot)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd(self, other)
    }
}

fn content_in(p: &Poly, x: &Atom) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(x).values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, x: &Atom) -> Poly {
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` viewed as polynomials in `x`.
fn prem(a: &Poly, b: &Poly, x: &Atom) -> Poly {
    let db = b.degree_in(x);
    let lcb = b.coeffs_in(x).remove(&db).unwrap_or_default();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(x);
        if dr < db {
            return r;
        }
        let lcr = r.coeffs_in(x).remove(&dr).unwrap_or_default();
        let shift = Poly::monomial(Monomial::atom(x.clone(), dr - db), Coeff::one());
        r = r.mul(&lcb).sub(&lcr.mul(&shift).mul(b));
    }
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    // An atom present in only one argument cannot divide the gcd.
    if let Some(x) = atoms_a.symmetric_difference(&atoms_b).next() {
        let (with, without) = if atoms_a.contains(x) { (a, b) } else { (b, a) };
        let mut g = without.clone();
        for c in with.coeffs_in(x).values() {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        return g.monic();
    }
    let x = atoms_a.iter().next().unwrap().clone();
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let (mut r0, mut r1) = if pa.degree_in(&x) >= pb.degree_in(&x) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = prem(&r0, &r1, &x);
        if r.is_zero() {
            break;
        }
        r0 = r1;
        r1 = primitive_part(&r, &x);
    }
    c.mul(&primitive_part(&r1, &x)).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: &str) -> Poly {
        Poly::from_atom(Atom::Sym(Symbol::new(n)))
    }

    fn c(n: i64) -> Poly {
        Poly::constant(Coeff::from_int(n))
    }

    #[test]
    fn gcd_of_products() {
        let (x, y) = (sym("x"), sym("y"));
        let a = x.add(&y).mul(&x.sub(&c(1)));
        let b = x.add(&y).mul(&y.add(&c(2)));
        assert_eq!(a.gcd(&b), x.add(&y));
        let sq = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(sq.gcd(&x.sub(&y).scale(&Coeff::from_int(3))), x.sub(&y));
        assert!(x.gcd(&y).is_one());
    }

    #[test]
    fn exact_division() {
        let (x, y) = (sym("x"), sym("y"));
        let a = x.add(&y);
        let b = x.sub(&y);
        assert_eq!(a.mul(&b).div_exact(&b), Some(a.clone()));
        assert_eq!(a.div_exact(&b), None);
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let x = Monomial::atom(Atom::Sym(Symbol::new("x")), 1);
        let y2 = Monomial::atom(Atom::Sym(Symbol::new("y")), 2);
        assert_eq!(x.grlex_cmp(&y2), Ordering::Less);
        let y = Monomial::atom(Atom::Sym(Symbol::new("y")), 1);
        assert_eq!(x.grlex_cmp(&y), Ordering::Greater);
    }
}
