//! Univariate polynomials (minimal polynomials, squarefree splitting,
//! Berlekamp over prime fields) and sparse multivariate polynomials for the
//! emitted chart systems.

use crate::field::{Field, Scalar};
use crate::linalg::Matrix;
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeMap;

/// Dense univariate polynomial, coefficients ascending, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub field: Field,
    pub coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero(field: Field) -> UniPoly {
        UniPoly {
            field,
            coeffs: vec![],
        }
    }

    pub fn constant(field: Field, c: Scalar) -> UniPoly {
        let mut p = UniPoly {
            field,
            coeffs: vec![c],
        };
        p.normalize();
        p
    }

    pub fn from_coeffs(field: Field, coeffs: Vec<Scalar>) -> UniPoly {
        let mut p = UniPoly { field, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if self.field.is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &Scalar {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).unwrap();
        self.scale(&inv)
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(
            self.field,
            self.coeffs.iter().map(|x| self.field.mul(x, c)).collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![f.zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = f.add(&out[i], c);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = f.add(&out[i], c);
        }
        UniPoly::from_coeffs(f, out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        UniPoly::from_coeffs(f, out)
    }

    pub fn divmod(&self, div: &UniPoly) -> (UniPoly, UniPoly) {
        let f = self.field;
        assert!(!div.is_zero());
        let mut rem = self.coeffs.clone();
        let d = div.degree();
        let lead_inv = f.inv(div.lead()).unwrap();
        let mut quot = vec![f.zero(); rem.len().saturating_sub(d)];
        while rem.len() > d || (rem.len() == d + 1 && d == 0 && !rem.is_empty()) {
            if rem.len() < d + 1 {
                break;
            }
            let k = rem.len() - 1 - d;
            let c = f.mul(rem.last().unwrap(), &lead_inv);
            if !f.is_zero(&c) {
                quot[k] = c.clone();
                for (i, b) in div.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(&rem[k + i], &f.mul(&c, b));
                }
            }
            rem.pop();
        }
        (UniPoly::from_coeffs(f, quot), UniPoly::from_coeffs(f, rem))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns (g, u, v) with u·self + v·other = g.
    pub fn xgcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (
            UniPoly::constant(f, f.one()),
            UniPoly::zero(f),
        );
        let (mut t0, mut t1) = (
            UniPoly::zero(f),
            UniPoly::constant(f, f.one()),
        );
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> UniPoly {
        let f = self.field;
        let coeffs: Vec<Scalar> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
            .collect();
        UniPoly::from_coeffs(f, coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// Evaluates at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let f = self.field;
        let n = m.rows;
        let mut acc = Matrix::zero(f, n, n);
        for c in self.coeffs.iter().rev() {
            acc = m.mul(&acc);
            for i in 0..n {
                let v = f.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Squarefree part; over F_p handles vanishing derivatives via the
    /// Frobenius identity f(x) = g(x)^p.
    pub fn squarefree_part(&self) -> UniPoly {
        let f = self.field;
        if self.degree() == 0 || self.is_zero() {
            return self.monic();
        }
        let der = self.derivative();
        if der.is_zero() {
            // every exponent is divisible by p; over F_p the coefficients
            // are Frobenius-fixed, so f = g(x)^p with g literal
            if let Field::Prime(p) = f {
                let mut g = Vec::new();
                for (i, c) in self.coeffs.iter().enumerate() {
                    if i % (p as usize) == 0 {
                        g.push(c.clone());
                    } else {
                        debug_assert!(f.is_zero(c));
                    }
                }
                return UniPoly::from_coeffs(f, g).squarefree_part();
            }
            return self.monic();
        }
        let g = self.gcd(&der);
        if g.degree() == 0 {
            return self.monic();
        }
        let (q, _) = self.divmod(&g);
        q.squarefree_part()
    }

    /// Minimal polynomial of a square matrix, by the first linear dependence
    /// among I, A, A², …
    pub fn min_poly(field: Field, a: &Matrix) -> UniPoly {
        let n = a.rows;
        let mut powers: Vec<Matrix> = vec![Matrix::identity(field, n)];
        loop {
            let k = powers.len();
            // flatten powers into rows and look for a dependence ending at A^k
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for p in &powers {
                let mut flat = Vec::with_capacity(n * n);
                for i in 0..n {
                    flat.extend(p.row(i));
                }
                rows.push(flat);
            }
            let next = powers.last().unwrap().mul(a);
            let mut target = Vec::with_capacity(n * n);
            for i in 0..n {
                target.extend(next.row(i));
            }
            // solve Σ x_i rows[i] = target
            let m = Matrix::from_rows(field, n * n, rows).unwrap().transpose();
            let mut aug = Matrix::zero(field, n * n, k + 1);
            for i in 0..n * n {
                for j in 0..k {
                    aug.set(i, j, m.get(i, j).clone());
                }
                aug.set(i, k, target[i].clone());
            }
            let pivots = aug.rref();
            if pivots.last().map(|&c| c < k).unwrap_or(true) {
                let mut sol = vec![field.zero(); k];
                for (r, &c) in pivots.iter().enumerate() {
                    sol[c] = aug.get(r, k).clone();
                }
                let mut coeffs: Vec<Scalar> = sol.into_iter().map(|c| field.neg(&c)).collect();
                coeffs.push(field.one());
                return UniPoly::from_coeffs(field, coeffs);
            }
            powers.push(next);
        }
    }

    /// Rational roots of a rational-coefficient polynomial (trial division
    /// over divisors of the outer coefficients, small-factor bounded).
    pub fn rational_roots(&self) -> Vec<Scalar> {
        let f = self.field;
        assert_eq!(f, Field::Rational);
        if self.is_zero() {
            return vec![];
        }
        let mut roots = Vec::new();
        if self.coeffs.first().map(|c| f.is_zero(c)).unwrap_or(false) {
            roots.push(f.zero());
        }
        // scale to integer coefficients
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.rat().denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c.rat() * num::BigRational::from(lcm.clone())).to_integer())
            .collect();
        let a0 = ints.iter().find(|c| !c.is_zero()).unwrap().abs();
        let an = ints.last().unwrap().abs();
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let mut out = vec![BigInt::one()];
            let mut m = n.clone();
            let mut d = BigInt::from(2u32);
            let bound = BigInt::from(1_000_000u64);
            while &d * &d <= m && d <= bound {
                while (&m % &d).is_zero() {
                    let mut extra = Vec::new();
                    for x in &out {
                        extra.push(x * &d);
                    }
                    out.extend(extra);
                    out.sort();
                    out.dedup();
                    m = &m / &d;
                }
                d += 1;
            }
            if !m.is_one() {
                let mut extra = Vec::new();
                for x in &out {
                    extra.push(x * &m);
                }
                out.extend(extra);
                out.sort();
                out.dedup();
            }
            out
        };
        for p in divisors(&a0) {
            for q in divisors(&an) {
                for sign in [1i64, -1] {
                    let cand = Scalar::Rat(num::BigRational::new(
                        &p * BigInt::from(sign),
                        q.clone(),
                    ));
                    if f.is_zero(&self.eval(&cand)) && !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
        roots
    }

    /// Berlekamp factorization over F_p into irreducible factors; the input
    /// need not be squarefree (the squarefree part is factored and
    /// multiplicities are dropped, which is all idempotent splitting needs).
    pub fn berlekamp_distinct_factors(&self) -> Vec<UniPoly> {
        let f = self.field;
        let Field::Prime(p) = f else {
            panic!("berlekamp requires a prime field")
        };
        let sf = self.squarefree_part();
        let mut work = vec![sf];
        let mut out = Vec::new();
        while let Some(g) = work.pop() {
            if g.degree() <= 1 {
                if g.degree() == 1 {
                    out.push(g);
                }
                continue;
            }
            let n = g.degree();
            // Frobenius matrix: column i = x^{ip} mod g
            let mut q = Matrix::zero(f, n, n);
            for i in 0..n {
                let mut xpow = vec![f.zero(); (i * p as usize) + 1];
                *xpow.last_mut().unwrap() = f.one();
                let xp = UniPoly::from_coeffs(f, xpow);
                let (_, r) = xp.divmod(&g);
                for (k, c) in r.coeffs.iter().enumerate() {
                    q.set(k, i, c.clone());
                }
            }
            for i in 0..n {
                let v = f.sub(q.get(i, i), &f.one());
                q.set(i, i, v);
            }
            let kernel = q.nullspace();
            if kernel.len() <= 1 {
                out.push(g.monic());
                continue;
            }
            // find a kernel vector that splits g
            let mut split = None;
            'outer: for v in kernel.iter() {
                let vp = UniPoly::from_coeffs(f, v.clone());
                if vp.degree() == 0 {
                    continue;
                }
                for c in 0..p {
                    let shifted = vp.sub(&UniPoly::constant(f, f.from_i64(c as i64)));
                    let d = g.gcd(&shifted);
                    if d.degree() > 0 && d.degree() < g.degree() {
                        split = Some(d);
                        break 'outer;
                    }
                }
            }
            match split {
                Some(d) => {
                    let (q2, _) = g.divmod(&d);
                    work.push(d);
                    work.push(q2);
                }
                None => out.push(g.monic()),
            }
        }
        out.sort_by_key(|p| p.degree());
        out
    }
}

/// Monomial: variable index -> exponent (empty = 1).
pub type Monomial = BTreeMap<usize, u32>;

/// Sparse multivariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub field: Field,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl MPoly {
    pub fn zero(field: Field) -> MPoly {
        MPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, c: Scalar) -> MPoly {
        let mut p = MPoly::zero(field);
        if !field.is_zero(&c) {
            p.terms.insert(Monomial::new(), c);
        }
        p
    }

    pub fn var(field: Field, v: usize) -> MPoly {
        let mut m = Monomial::new();
        m.insert(v, 1);
        let mut p = MPoly::zero(field);
        p.terms.insert(m, field.one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        let f = self.field;
        if f.is_zero(&c) {
            return;
        }
        let v = match self.terms.get(&m) {
            Some(x) => f.add(x, &c),
            None => c,
        };
        if f.is_zero(&v) {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        let f = self.field;
        if f.is_zero(c) {
            return MPoly::zero(f);
        }
        MPoly {
            field: f,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), f.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let f = self.field;
        let mut out = MPoly::zero(f);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                for (v, e) in m2 {
                    *m.entry(*v).or_insert(0) += e;
                }
                out.add_term(m, f.mul(c1, c2));
            }
        }
        out
    }

    pub fn vars_used(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.keys().copied())
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    /// Substitutes a polynomial for one variable.
    pub fn subst(&self, v: usize, value: &MPoly) -> MPoly {
        let f = self.field;
        let mut out = MPoly::zero(f);
        for (m, c) in &self.terms {
            let e = m.get(&v).copied().unwrap_or(0);
            let mut rest = m.clone();
            rest.remove(&v);
            let mut term = MPoly::zero(f);
            term.terms.insert(rest, c.clone());
            let mut powered = term;
            for _ in 0..e {
                powered = powered.mul(value);
            }
            out = out.add(&powered);
        }
        out
    }

    pub fn eval(&self, assignment: &BTreeMap<usize, Scalar>) -> Scalar {
        let f = self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m {
                let x = assignment.get(v).expect("assignment covers variables");
                for _ in 0..*e {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Total degree of a monomial, with the graded-lex compare used for
    /// deterministic printing.
    fn mono_key(m: &Monomial) -> (u32, Vec<(usize, u32)>) {
        let total: u32 = m.values().sum();
        (total, m.iter().map(|(v, e)| (*v, *e)).collect())
    }

    /// Leading (monomial, coefficient) in graded-lex order.
    pub fn leading(&self) -> Option<(Monomial, Scalar)> {
        self.terms
            .iter()
            .max_by(|a, b| Self::mono_key(a.0).cmp(&Self::mono_key(b.0)))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Remainder of division by a single polynomial, graded-lex.
    pub fn reduce_mod(&self, divisor: &MPoly) -> MPoly {
        let f = self.field;
        let Some((dm, dc)) = divisor.leading() else {
            return self.clone();
        };
        let dc_inv = f.inv(&dc).unwrap();
        let mut rem = self.clone();
        loop {
            // find a term divisible by the leading monomial of the divisor
            let target = rem.terms.iter().find_map(|(m, c)| {
                let divides = dm.iter().all(|(v, e)| m.get(v).copied().unwrap_or(0) >= *e);
                if divides {
                    Some((m.clone(), c.clone()))
                } else {
                    None
                }
            });
            let Some((m, c)) = target else {
                return rem;
            };
            let mut quot_mono = m.clone();
            for (v, e) in &dm {
                let left = quot_mono[v] - e;
                if left == 0 {
                    quot_mono.remove(v);
                } else {
                    quot_mono.insert(*v, left);
                }
            }
            let mut quot = MPoly::zero(f);
            quot.terms.insert(quot_mono, f.mul(&c, &dc_inv));
            rem = rem.sub(&quot.mul(divisor));
        }
    }

    /// Scales so the leading monomial has coefficient one; the zero
    /// polynomial stays zero.
    pub fn normalized(&self) -> MPoly {
        let f = self.field;
        let Some((_, lead)) = self
            .terms
            .iter()
            .max_by(|a, b| Self::mono_key(a.0).cmp(&Self::mono_key(b.0)))
        else {
            return self.clone();
        };
        self.scale(&f.inv(lead).unwrap())
    }

    /// Deterministic expanded form with integer coefficients: rational
    /// polynomials are scaled by the denominator lcm and content-normalized,
    /// the leading monomial gets a positive sign.
    pub fn to_integer_string(&self, var_name: &dyn Fn(usize) -> String) -> String {
        let f = self.field;
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        terms.sort_by(|a, b| Self::mono_key(b.0).cmp(&Self::mono_key(a.0)));
        // integer normalization
        let ints: Vec<BigInt> = match f {
            Field::Rational => {
                let mut lcm = BigInt::one();
                for (_, c) in &terms {
                    lcm = lcm.lcm(c.rat().denom());
                }
                let raw: Vec<BigInt> = terms
                    .iter()
                    .map(|(_, c)| (c.rat() * num::BigRational::from(lcm.clone())).to_integer())
                    .collect();
                let mut content = BigInt::zero();
                for v in &raw {
                    content = content.gcd(v);
                }
                if content.is_zero() {
                    content = BigInt::one();
                }
                let sign = if raw[0].is_negative() {
                    BigInt::from(-1)
                } else {
                    BigInt::one()
                };
                raw.iter().map(|v| v / (&content * &sign)).collect()
            }
            Field::Prime(_) => terms
                .iter()
                .map(|(_, c)| c.as_bigint().unwrap())
                .collect(),
        };
        let mut out = String::new();
        for (k, ((m, _), coeff)) in terms.iter().zip(ints).enumerate() {
            let neg = coeff.is_negative();
            let abs = coeff.abs();
            if k == 0 {
                if neg {
                    out.push_str("-");
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m
                .iter()
                .map(|(v, e)| {
                    if *e == 1 {
                        var_name(*v)
                    } else {
                        format!("{}^{}", var_name(*v), e)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divmod_gcd() {
        let f = Field::Rational;
        // (x-1)(x-2) and (x-1)(x-3)
        let p = UniPoly::from_coeffs(f, vec![f.from_i64(2), f.from_i64(-3), f.one()]);
        let q = UniPoly::from_coeffs(f, vec![f.from_i64(3), f.from_i64(-4), f.one()]);
        let g = p.gcd(&q);
        assert_eq!(
            g,
            UniPoly::from_coeffs(f, vec![f.from_i64(-1), f.one()])
        );
        let (quo, rem) = p.divmod(&g);
        assert!(rem.is_zero());
        assert_eq!(quo.degree(), 1);
        let (gg, u, v) = p.xgcd(&q);
        assert_eq!(gg, g);
        assert_eq!(u.mul(&p).add(&v.mul(&q)), g);
    }

    #[test]
    fn min_poly_of_projection() {
        let f = Field::Rational;
        let mut m = Matrix::zero(f, 2, 2);
        m.set(0, 0, f.one());
        let mp = UniPoly::min_poly(f, &m);
        // x(x-1) = x^2 - x
        assert_eq!(
            mp,
            UniPoly::from_coeffs(f, vec![f.zero(), f.from_i64(-1), f.one()])
        );
    }

    #[test]
    fn rational_roots_simple() {
        let f = Field::Rational;
        // (2x-1)(x+3)
        let p = UniPoly::from_coeffs(f, vec![f.from_i64(-3), f.from_i64(5), f.from_i64(2)]);
        let mut roots = p.rational_roots();
        roots.sort_by(|a, b| a.rat().cmp(b.rat()));
        assert_eq!(roots, vec![f.from_i64(-3), f.from_ratio(1, 2).unwrap()]);
    }

    #[test]
    fn berlekamp_f2() {
        let f = Field::prime(2).unwrap();
        // x^2 + x = x(x+1)
        let p = UniPoly::from_coeffs(f, vec![f.zero(), f.one(), f.one()]);
        let factors = p.berlekamp_distinct_factors();
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|q| q.degree() == 1));
        // x^2 + x + 1 is irreducible over F_2
        let irr = UniPoly::from_coeffs(f, vec![f.one(), f.one(), f.one()]);
        assert_eq!(irr.berlekamp_distinct_factors().len(), 1);
    }

    #[test]
    fn mpoly_arith_and_print() {
        let f = Field::Rational;
        let x = MPoly::var(f, 0);
        let y = MPoly::var(f, 1);
        let p = y.sub(&x.mul(&x));
        let name = |v: usize| if v == 0 { "x1".to_string() } else { "x2".to_string() };
        // sign-normalized: leading monomial positive
        assert_eq!(p.to_integer_string(&name), "x1^2 - x2");
        let q = p.subst(1, &x.mul(&x));
        assert!(q.is_zero());
        let half = MPoly::constant(f, f.from_ratio(1, 2).unwrap());
        let scaled = p.mul(&half);
        assert_eq!(scaled.to_integer_string(&name), "x1^2 - x2");
    }
}
