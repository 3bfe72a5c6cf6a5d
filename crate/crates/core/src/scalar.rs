//! Exact scalars: rationals, Laurent polynomials in `q`, and the field of
//! rational functions `Q(q)` in a canonical reduced form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QmaError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Laurent polynomial `sum c_k q^(lo+k)` with rational coefficients.
/// Stored densely; the first and last coefficients are nonzero unless the
/// polynomial is zero, in which case `c` is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QLaurent {
    lo: i32,
    c: Vec<Rational>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent { lo: 0, c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        Self::monomial(r, 0)
    }

    pub fn monomial(r: Rational, e: i32) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            QLaurent { lo: e, c: vec![r] }
        }
    }

    pub fn q_pow(e: i32) -> Self {
        Self::monomial(Rational::one(), e)
    }

    /// Build from (exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(terms: I) -> Self {
        let terms: Vec<(i32, Rational)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut c = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, r) in terms {
            c[(e - lo) as usize] += r;
        }
        Self::normalized(lo, c)
    }

    fn normalized(mut lo: i32, mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
        if lead_zeros == c.len() {
            return Self::zero();
        }
        if lead_zeros > 0 {
            c.drain(..lead_zeros);
            lo += lead_zeros as i32;
        }
        QLaurent { lo, c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.c.len() == 1 && self.c[0].is_one()
    }

    /// Lowest exponent (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.lo
    }

    /// Highest exponent (lowest - 1 for the zero polynomial).
    pub fn high(&self) -> i32 {
        self.lo + self.c.len() as i32 - 1
    }

    pub fn coeff(&self, e: i32) -> Rational {
        let k = e - self.lo;
        if k < 0 || k as usize >= self.c.len() {
            Rational::zero()
        } else {
            self.c[k as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(move |(k, r)| (self.lo + k as i32, r))
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.lo == 0 && self.c.len() == 1)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.lo == 0 && self.c.len() == 1 {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn leading(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn shift(&self, s: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        QLaurent { lo: self.lo + s, c: self.c.clone() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        QLaurent { lo: self.lo, c: self.c.iter().map(|x| x * r).collect() }
    }

    /// Substitute q -> q^-1.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.c.clone();
        c.reverse();
        QLaurent { lo: -self.high(), c }
    }

    pub fn eval_at_one(&self) -> Rational {
        self.c.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        // Horner on the polynomial part, then multiply by x^lo.
        let mut acc = Rational::zero();
        for r in self.c.iter().rev() {
            acc = acc * x + r;
        }
        acc * pow_rat(x, self.lo)
    }

    fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.high().max(o.high());
        let mut c = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (k, r) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + k] += r;
        }
        for (k, r) in o.c.iter().enumerate() {
            c[(o.lo - lo) as usize + k] += r;
        }
        Self::normalized(lo, c)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::normalized(self.lo + o.lo, c)
    }

    fn neg_ref(&self) -> Self {
        QLaurent { lo: self.lo, c: self.c.iter().map(|x| -x).collect() }
    }

    /// Dense coefficient vector of the polynomial `q^-lo * self`.
    fn poly(&self) -> Vec<Rational> {
        self.c.clone()
    }

    fn from_poly(lo: i32, c: Vec<Rational>) -> Self {
        Self::normalized(lo, c)
    }
}

fn pow_rat(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, o: &QLaurent) -> QLaurent {
        self.add_ref(o)
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, o: &QLaurent) -> QLaurent {
        self.add_ref(&o.neg_ref())
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, o: &QLaurent) -> QLaurent {
        self.mul_ref(o)
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        self.neg_ref()
    }
}

// Dense polynomial helpers over Q (index = exponent).

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
}

/// Division with remainder of dense polynomials; `b` must be nonzero.
fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r: Vec<Rational> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b[db].clone();
    let mut quot = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = &r[r.len() - 1] / &lb;
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                let t = &f * bj;
                r[k + j] -= t;
            }
        }
        quot[k] = f;
        r.pop();
        poly_trim(&mut r);
    }
    poly_trim(&mut quot);
    (quot, r)
}

fn poly_monic(p: &mut [Rational]) {
    if let Some(l) = p.last().cloned() {
        for x in p.iter_mut() {
            *x = &*x / &l;
        }
    }
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
        poly_monic(&mut y);
    }
    poly_monic(&mut x);
    x
}

/// Element of Q(q), kept as `num / den` with `den` a polynomial having
/// nonzero constant term and leading coefficient 1, coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: QLaurent,
    den: QLaurent,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: QLaurent::zero(), den: QLaurent::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: QLaurent::one(), den: QLaurent::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        RatFunc { num: QLaurent::constant(r), den: QLaurent::one() }
    }

    pub fn q_pow(e: i32) -> Self {
        RatFunc { num: QLaurent::q_pow(e), den: QLaurent::one() }
    }

    pub fn from_laurent(p: QLaurent) -> Self {
        RatFunc { num: p, den: QLaurent::one() }
    }

    /// Canonical form of `num / den`.
    pub fn new(num: QLaurent, den: QLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(QmaError::Domain("division by zero in Q(q)".into()));
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: QLaurent, den: QLaurent) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let num = num.shift(-den.lo);
        let den = den.shift(-den.lo);
        if den.c.len() == 1 {
            let inv = den.c[0].recip();
            return RatFunc { num: num.scale(&inv), den: QLaurent::one() };
        }
        let np = num.poly();
        let dp = den.poly();
        let g = poly_gcd(&np, &dp);
        let (mut np, mut dp) = if g.len() > 1 {
            (poly_divrem(&np, &g).0, poly_divrem(&dp, &g).0)
        } else {
            (np, dp)
        };
        let l = dp.last().unwrap().clone();
        if !l.is_one() {
            for x in dp.iter_mut() {
                *x = &*x / &l;
            }
            for x in np.iter_mut() {
                *x = &*x / &l;
            }
        }
        RatFunc { num: QLaurent::from_poly(num.lo, np), den: QLaurent::from_poly(0, dp) }
    }

    pub fn numer(&self) -> &QLaurent {
        &self.num
    }

    pub fn denom(&self) -> &QLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: &self.num + &o.num, den: QLaurent::one() };
        }
        if self.den == o.den {
            return Self::canonical(&self.num + &o.num, self.den.clone());
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::canonical(n, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: &self.num * &o.num, den: QLaurent::one() };
        }
        Self::canonical(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QmaError::Domain("inverse of zero in Q(q)".into()));
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(QmaError::Domain("division by zero in Q(q)".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Self::canonical(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn scale_q(&self, e: i32) -> Self {
        if e == 0 {
            return self.clone();
        }
        RatFunc { num: self.num.shift(e), den: self.den.clone() }
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(r), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Substitute q -> q^-1.
    pub fn bar(&self) -> Self {
        Self::canonical(self.num.bar(), self.den.bar())
    }

    /// Value at q = 1; fails when q = 1 is a pole.
    pub fn specialize_q1(&self) -> Result<Rational> {
        let d = self.den.eval_at_one();
        if d.is_zero() {
            return Err(QmaError::Specialization(format!("pole at q = 1 in {}", self)));
        }
        Ok(self.num.eval_at_one() / d)
    }

    /// Value at a rational point, if defined.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Value at q = x modulo a prime p, if the denominator is invertible.
    pub fn eval_mod(&self, x: u64, p: u64) -> Option<u64> {
        let n = laurent_eval_mod(&self.num, x, p)?;
        let d = laurent_eval_mod(&self.den, x, p)?;
        if d == 0 {
            None
        } else {
            Some(mulmod(n, powmod(d, p - 2, p), p))
        }
    }

    /// Order of vanishing at q = 1 of the numerator minus that of the
    /// denominator.
    pub fn order_at_one(&self) -> i32 {
        if self.is_zero() {
            return i32::MAX;
        }
        order_at_one(&self.num) - order_at_one(&self.den)
    }
}

fn order_at_one(p: &QLaurent) -> i32 {
    let mut c = p.poly();
    let one = vec![rat(-1), rat(1)];
    let mut k = 0;
    loop {
        let (qt, r) = poly_divrem(&c, &one);
        if !r.is_empty() {
            return k;
        }
        c = qt;
        k += 1;
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64()?;
    let d = r.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(mulmod(n, powmod(d, p - 2, p), p))
}

fn laurent_eval_mod(l: &QLaurent, x: u64, p: u64) -> Option<u64> {
    let mut acc = 0u64;
    for r in l.c.iter().rev() {
        acc = (mulmod(acc, x, p) + rational_mod(r, p)?) % p;
    }
    let xe = if l.lo >= 0 {
        powmod(x, l.lo as u64, p)
    } else {
        let xi = powmod(x, p - 2, p);
        powmod(xi, (-l.lo) as u64, p)
    };
    Some(mulmod(acc, xe, p))
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        RatFunc::add(self, o)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        RatFunc::sub(self, o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::mul(self, o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let terms: Vec<(i32, &Rational)> = self.terms().collect();
        for (e, r) in terms.into_iter().rev() {
            let neg = r.is_negative();
            let a = r.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let qpart = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{}", e),
            };
            if qpart.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", qpart)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), qpart)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Balanced q-integer `(q^{dm} - q^{-dm}) / (q^d - q^{-d})`.
pub fn q_integer(m: i64, d: u32) -> RatFunc {
    if m == 0 {
        return RatFunc::zero();
    }
    let d = d as i32;
    let n = m.unsigned_abs() as i32;
    // q^{d(n-1)} + q^{d(n-3)} + ... + q^{-d(n-1)}
    let terms = (0..n).map(|k| (d * (n - 1 - 2 * k), Rational::one()));
    let p = RatFunc::from_laurent(QLaurent::from_terms(terms));
    if m < 0 {
        p.neg()
    } else {
        p
    }
}

pub fn q_factorial(n: u32, d: u32) -> RatFunc {
    (1..=n as i64).fold(RatFunc::one(), |acc, k| acc.mul(&q_integer(k, d)))
}

pub fn q_binomial(n: u32, k: u32, d: u32) -> RatFunc {
    if k > n {
        return RatFunc::zero();
    }
    let num = q_factorial(n, d);
    let den = q_factorial(k, d).mul(&q_factorial(n - k, d));
    num.div(&den).expect("q-factorials are nonzero")
}

/// `q^d - q^{-d}`.
pub fn q_diff(d: u32) -> RatFunc {
    let d = d as i32;
    RatFunc::from_laurent(QLaurent::from_terms([(d, rat(1)), (-d, rat(-1))]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(terms: &[(i32, i64)]) -> RatFunc {
        RatFunc::from_laurent(QLaurent::from_terms(terms.iter().map(|&(e, c)| (e, rat(c)))))
    }

    #[test]
    fn laurent_addition() {
        assert_eq!(l(&[(1, 1)]).add(&l(&[(-1, 1)])), l(&[(1, 1), (-1, 1)]));
    }

    #[test]
    fn inverse_law() {
        let x = q_diff(1);
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }

    #[test]
    fn exact_quotient_reduces_to_laurent() {
        let a = l(&[(2, 1), (-2, -1)]);
        let b = q_diff(1);
        assert_eq!(a.div(&b).unwrap(), l(&[(1, 1), (-1, 1)]));
    }

    #[test]
    fn q_integers() {
        assert!(q_integer(0, 1).is_zero());
        assert_eq!(q_integer(2, 1), l(&[(1, 1), (-1, 1)]));
        assert_eq!(q_integer(3, 2), l(&[(4, 1), (0, 1), (-4, 1)]));
        assert_eq!(q_factorial(0, 1), RatFunc::one());
        assert_eq!(q_factorial(2, 1), l(&[(1, 1), (-1, 1)]));
        assert_eq!(q_binomial(2, 1, 1), l(&[(1, 1), (-1, 1)]));
    }

    #[test]
    fn specialization() {
        assert_eq!(l(&[(1, 1), (-1, 1)]).specialize_q1().unwrap(), rat(2));
        let r = l(&[(2, 1), (-2, -1)]).div(&q_diff(1)).unwrap();
        assert_eq!(r.specialize_q1().unwrap(), rat(2));
        let pole = RatFunc::one().div(&l(&[(1, 1), (0, -1)])).unwrap();
        assert!(pole.specialize_q1().is_err());
    }

    #[test]
    fn canonical_denominator_shape() {
        // 1 / (q^2 + q) = q^-1 / (q + 1)
        let r = RatFunc::one().div(&l(&[(2, 1), (1, 1)])).unwrap();
        assert_eq!(r.denom().low(), 0);
        assert!(r.denom().leading().is_one());
        assert_eq!(r.to_string(), "(q^-1)/(q+1)");
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        assert!(RatFunc::one().div(&RatFunc::zero()).is_err());
        assert!(RatFunc::zero().inv().is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(l(&[(2, 1), (0, 1)]).to_string(), "q^2+1");
        assert_eq!(l(&[(-1, -2)]).to_string(), "-2*q^-1");
        assert_eq!(RatFunc::from_rational(rat_frac(3, 2)).to_string(), "3/2");
    }
}
