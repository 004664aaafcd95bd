//! Exact arithmetic kernels.
//!
//! Three small commutative rings, all with arbitrary-precision integer
//! coefficients and no normalization beyond dropping zero terms:
//!
//! - [`LaurentZ`]: sparse integer Laurent polynomials in one variable `x`.
//! - [`SignedLaurent`]: the ring `Z[x^{±1}] ⊕ Z[x^{±1}]·σ` with `σ² = 1`.
//!   An element `P + σP'` stands for the family `P(q^r) + (-1)^r P'(q^r)`
//!   with `r` symbolic, so `x` plays the role of `q^r` and `σ` of `(-1)^r`.
//! - [`RationalQQ`]: fractions of sparse integer Laurent polynomials in two
//!   independent variables `q`, `qt`, compared by cross-multiplication.
//!
//! [`FractionSL`] is the fraction pair over [`SignedLaurent`] used by the
//! symbolic inverse checks; no gcd reduction is performed anywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sparse integer Laurent polynomial: exponent -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentZ {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentZ {
    pub fn zero() -> Self {
        LaurentZ::default()
    }

    pub fn one() -> Self {
        LaurentZ::monomial(0, 1)
    }

    /// `c * x^k`, dropping the term when `c = 0`.
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = LaurentZ::default();
        p.add_term(exp, coeff.into());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentZ {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentZ::default();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentZ::zero();
        }
        LaurentZ {
            coeffs: self.coeffs.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Substitute `x -> x^-1`.
    pub fn invert_var(&self) -> Self {
        LaurentZ {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }
}

/// Quantum integer `[m]_x = x^{m-1} + x^{m-3} + ... + x^{1-m}` for `m >= 0`.
pub fn quantum_int(m: u64) -> LaurentZ {
    let mut p = LaurentZ::zero();
    let m = m as i64;
    let mut e = m - 1;
    while e >= 1 - m {
        p.add_term(e, BigInt::one());
        e -= 2;
    }
    p
}

/// Signed quantum integer `(x^k - x^{-k})/(x - x^{-1})`: equals `[k]` for
/// `k >= 0` and `-[-k]` for `k < 0`.
pub fn quantum_int_signed(k: i64) -> LaurentZ {
    if k >= 0 {
        quantum_int(k as u64)
    } else {
        quantum_int((-k) as u64).neg()
    }
}

/// Element `P + σP'` of `Z[x^{±1}][σ]/(σ²-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SignedLaurent {
    pub even: LaurentZ,
    pub odd: LaurentZ,
}

impl SignedLaurent {
    pub fn zero() -> Self {
        SignedLaurent::default()
    }

    pub fn one() -> Self {
        SignedLaurent::from_even(LaurentZ::one())
    }

    pub fn sigma() -> Self {
        SignedLaurent {
            even: LaurentZ::zero(),
            odd: LaurentZ::one(),
        }
    }

    pub fn from_even(p: LaurentZ) -> Self {
        SignedLaurent {
            even: p,
            odd: LaurentZ::zero(),
        }
    }

    pub fn from_odd(p: LaurentZ) -> Self {
        SignedLaurent {
            even: LaurentZ::zero(),
            odd: p,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        SignedLaurent {
            even: self.even.add(&other.even),
            odd: self.odd.add(&other.odd),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SignedLaurent {
            even: self.even.sub(&other.even),
            odd: self.odd.sub(&other.odd),
        }
    }

    pub fn neg(&self) -> Self {
        SignedLaurent {
            even: self.even.neg(),
            odd: self.odd.neg(),
        }
    }

    /// Ring product with `σ² = 1`:
    /// `(P₁+σP₁')(P₂+σP₂') = (P₁P₂+P₁'P₂') + σ(P₁P₂'+P₁'P₂)`.
    pub fn mul(&self, other: &Self) -> Self {
        SignedLaurent {
            even: self.even.mul(&other.even).add(&self.odd.mul(&other.odd)),
            odd: self.even.mul(&other.odd).add(&self.odd.mul(&other.even)),
        }
    }

    /// Multiply by `σ^k`.
    pub fn mul_sigma_pow(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            SignedLaurent {
                even: self.odd.clone(),
                odd: self.even.clone(),
            }
        }
    }

    /// `P + σP'` is a zero divisor iff `P² = P'²` (the two components
    /// `P ± P'` of the split `Z[x^{±}] × Z[x^{±}]` cannot both be nonzero).
    pub fn is_zero_divisor(&self) -> bool {
        self.even.mul(&self.even) == self.odd.mul(&self.odd)
    }

    /// Evaluate at a fixed integer `r`: `P(q^r) + (-1)^r P'(q^r)` as a
    /// Laurent polynomial in `q`.
    pub fn eval_at_r(&self, r: i64) -> LaurentZ {
        let mut out = LaurentZ::zero();
        let sgn = if r.rem_euclid(2) == 0 { 1 } else { -1 };
        for (e, c) in self.even.terms() {
            out.add_term(e * r, c.clone());
        }
        for (e, c) in self.odd.terms() {
            out.add_term(e * r, c * BigInt::from(sgn));
        }
        out
    }
}

fn fmt_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    coeff: &BigInt,
    body: &str,
) -> fmt::Result {
    let neg = coeff.sign() == num_bigint::Sign::Minus;
    let abs = if neg { -coeff } else { coeff.clone() };
    if *first {
        if neg {
            write!(f, "-")?;
        }
        *first = false;
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if abs.is_one() && !body.is_empty() {
        write!(f, "{body}")
    } else if body.is_empty() {
        write!(f, "{abs}")
    } else {
        write!(f, "{abs} {body}")
    }
}

fn power_body(e: i64) -> String {
    match e {
        0 => String::new(),
        1 => "q^r".to_string(),
        -1 => "q^-r".to_string(),
        _ => format!("q^{e}r"),
    }
}

impl fmt::Display for LaurentZ {
    /// Renders in the variable `q`, highest exponents first: `q^2 + 1 + q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let body = match *e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            fmt_term(f, &mut first, c, &body)?;
        }
        Ok(())
    }
}

impl fmt::Display for SignedLaurent {
    /// Renders with `x = q^r` and `σ = (-1)^r`, highest exponents first,
    /// even part before odd part: e.g. `q^r + q^-r` or `-(-1)^r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.even.terms().collect::<Vec<_>>().into_iter().rev() {
            fmt_term(f, &mut first, c, &power_body(*e))?;
        }
        for (e, c) in self.odd.terms().collect::<Vec<_>>().into_iter().rev() {
            let body = match *e {
                0 => "(-1)^r".to_string(),
                _ => format!("(-1)^r {}", power_body(*e)),
            };
            fmt_term(f, &mut first, c, &body)?;
        }
        Ok(())
    }
}

/// Errors from the exact-arithmetic layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingError {
    ZeroDenominator,
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

impl std::error::Error for RingError {}

/// Unreduced fraction over [`SignedLaurent`]; equality by cross-multiplication.
#[derive(Clone, Debug)]
pub struct FractionSL {
    num: SignedLaurent,
    den: SignedLaurent,
}

impl FractionSL {
    pub fn new(num: SignedLaurent, den: SignedLaurent) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Ok(FractionSL { num, den })
    }

    pub fn from_integral(p: SignedLaurent) -> Self {
        FractionSL {
            num: p,
            den: SignedLaurent::one(),
        }
    }

    pub fn zero() -> Self {
        FractionSL::from_integral(SignedLaurent::zero())
    }

    pub fn one() -> Self {
        FractionSL::from_integral(SignedLaurent::one())
    }

    pub fn num(&self) -> &SignedLaurent {
        &self.num
    }

    pub fn den(&self) -> &SignedLaurent {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        FractionSL {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        FractionSL {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn neg(&self) -> Self {
        FractionSL {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

/// `a/b = c/d` iff `ad = cb`. Sound for comparisons against fractions whose
/// denominators are non-zero-divisors, which is the only way they arise here.
pub fn fraction_eq(a: &FractionSL, b: &FractionSL) -> bool {
    a.num.mul(&b.den) == b.num.mul(&a.den)
}

/// Sparse integer Laurent polynomial in the two independent variables `q`, `qt`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentQQ {
    coeffs: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentQQ {
    pub fn zero() -> Self {
        LaurentQQ::default()
    }

    pub fn one() -> Self {
        LaurentQQ::monomial(0, 0, 1)
    }

    /// `c * q^u qt^v`.
    pub fn monomial(u: i64, v: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = LaurentQQ::default();
        p.add_term(u, v, coeff.into());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, u: i64, v: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry((u, v)).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&(u, v));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((u, v), c) in &other.coeffs {
            out.add_term(*u, *v, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentQQ {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentQQ::default();
        for ((u1, v1), c1) in &self.coeffs {
            for ((u2, v2), c2) in &other.coeffs {
                out.add_term(u1 + u2, v1 + v2, c1 * c2);
            }
        }
        out
    }

    /// Substitute `qt := -q^{-1}` at symbolic `r`, i.e. map the monomial
    /// `q^u qt^v` to `σ^v x^{u-v}` in [`SignedLaurent`].
    pub fn specialize_qt(&self) -> SignedLaurent {
        let mut out = SignedLaurent::zero();
        for ((u, v), c) in &self.coeffs {
            let mono = SignedLaurent::from_even(LaurentZ::monomial(u - v, c.clone()));
            out = out.add(&mono.mul_sigma_pow(*v));
        }
        out
    }
}

impl fmt::Display for LaurentQQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((u, v), c) in self.coeffs.iter().rev() {
            let mut body = String::new();
            if *u != 0 {
                body.push_str(&if *u == 1 {
                    "q".into()
                } else {
                    format!("q^{u}")
                });
            }
            if *v != 0 {
                if !body.is_empty() {
                    body.push(' ');
                }
                body.push_str(&if *v == 1 {
                    "qt".into()
                } else {
                    format!("qt^{v}")
                });
            }
            fmt_term(f, &mut first, c, &body)?;
        }
        Ok(())
    }
}

/// Fraction of two-variable Laurent polynomials; equality by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalQQ {
    num: LaurentQQ,
    den: LaurentQQ,
}

impl RationalQQ {
    pub fn new(num: LaurentQQ, den: LaurentQQ) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Ok(RationalQQ { num, den })
    }

    pub fn zero() -> Self {
        RationalQQ {
            num: LaurentQQ::zero(),
            den: LaurentQQ::one(),
        }
    }

    pub fn num(&self) -> &LaurentQQ {
        &self.num
    }

    pub fn den(&self) -> &LaurentQQ {
        &self.den
    }

    pub fn eq_cross(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RationalQQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentQQ::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
