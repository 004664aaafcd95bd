//! The ell-weight monomial ring `Y(eps)` in canonical form.
//!
//! Monomials are Laurent monomials in the variables `Y[i,a]` (`1 <= i <= M`),
//! `Yt[j,a]` (`M < j <= n-1`) and `D`, with spectral parameters on the
//! lattice `±q^Z` (optionally tagged by an orbit; parameters in distinct
//! orbits never satisfy any ratio condition). The generator `Yt[M,a]` of the
//! ambient ring is eliminated on construction through the defining relation
//! `Y[M,a] Yt[M,-a] = D`, i.e. `Yt[M,a] = D Y[M,-a]^{-1}`.

pub mod parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::EpsilonSeq;

/// Sign of a spectral parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn flip_if(self, odd: bool) -> Sign {
        if odd {
            self.flip()
        } else {
            self
        }
    }
}

/// Spectral parameter `±q^k` (with `q` not a root of unity), tagged by an
/// orbit identifier; everything of practical interest lives on orbit 0,
/// and parameters in distinct orbits never satisfy any ratio condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spec {
    pub orbit: u32,
    pub sign: Sign,
    pub exp: i64,
}

#[allow(clippy::should_implement_trait)] // negation of the scalar, not of a ring element
impl Spec {
    pub fn q_pow(exp: i64) -> Spec {
        Spec {
            orbit: 0,
            sign: Sign::Plus,
            exp,
        }
    }

    pub fn one() -> Spec {
        Spec::q_pow(0)
    }

    pub fn neg(self) -> Spec {
        Spec {
            sign: self.sign.flip(),
            ..self
        }
    }

    /// Multiply by `q^m`.
    pub fn mul_q(self, m: i64) -> Spec {
        Spec {
            exp: self.exp + m,
            ..self
        }
    }

    /// Multiply by `qt^m = (-q^{-1})^m`.
    pub fn mul_qt(self, m: i64) -> Spec {
        Spec {
            sign: self.sign.flip_if(m.rem_euclid(2) == 1),
            exp: self.exp - m,
            ..self
        }
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orbit != 0 {
            write!(f, "o{}:", self.orbit)?;
        }
        if self.sign == Sign::Minus {
            write!(f, "-")?;
        }
        write!(f, "q^{}", self.exp)
    }
}

/// A generator of the canonical ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    Y(usize, Spec),
    Yt(usize, Spec),
    D,
}

/// Errors raised while building or parsing monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LWeightError {
    BadNode { kind: &'static str, node: usize },
    Syntax { pos: usize, msg: String },
}

impl fmt::Display for LWeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LWeightError::BadNode { kind, node } => {
                write!(f, "variable {kind}[{node},..] out of range")
            }
            LWeightError::Syntax { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
        }
    }
}

impl std::error::Error for LWeightError {}

/// Canonical exponent map; the identity is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<VarKey, i64>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> impl Iterator<Item = (&VarKey, &i64)> {
        self.exps.iter()
    }

    pub fn exp_of(&self, key: &VarKey) -> i64 {
        self.exps.get(key).copied().unwrap_or(0)
    }

    fn add_exp(&mut self, key: VarKey, e: i64) {
        if e == 0 {
            return;
        }
        let entry = self.exps.entry(key).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.exps.remove(&key);
        }
    }

    /// Insert `var^e`, canonicalizing `Yt[M,a]^e` to `(D Y[M,-a]^{-1})^e`.
    /// Node ranges are validated against `eps`.
    pub fn mul_var(&mut self, eps: &EpsilonSeq, key: VarKey, e: i64) -> Result<(), LWeightError> {
        let m = eps.m();
        let nodes = eps.nodes();
        match key {
            VarKey::Y(i, _) => {
                if i < 1 || i > m || i > nodes {
                    return Err(LWeightError::BadNode { kind: "Y", node: i });
                }
                self.add_exp(key, e);
            }
            VarKey::Yt(j, a) => {
                if j < m || j > nodes || (j == 0) {
                    return Err(LWeightError::BadNode {
                        kind: "Yt",
                        node: j,
                    });
                }
                if j == m {
                    // Yt[M,a] = D Y[M,-a]^{-1}
                    self.add_exp(VarKey::D, e);
                    self.add_exp(VarKey::Y(m, a.neg()), -e);
                } else {
                    self.add_exp(key, e);
                }
            }
            VarKey::D => {
                self.add_exp(VarKey::D, e);
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (k, e) in &other.exps {
            out.add_exp(*k, *e);
        }
        out
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|(k, e)| (*k, -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|(k, x)| (*k, x * e)).collect(),
        }
    }

    /// Canonical text form, deterministic: factors ordered Y, Yt, D.
    pub fn format_canonical(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::with_capacity(self.exps.len());
        for (k, e) in &self.exps {
            let head = match k {
                VarKey::Y(i, a) => format!("Y[{i},{a}]"),
                VarKey::Yt(j, a) => format!("Yt[{j},{a}]"),
                VarKey::D => "D".to_string(),
            };
            if *e == 1 {
                parts.push(head);
            } else {
                parts.push(format!("{head}^{e}"));
            }
        }
        parts.join(" ")
    }

    /// Paper-style display: `D`-powers are re-paired with opposite-signed
    /// `Y[M,..]` exponents into `Yt[M,..]` factors wherever possible, e.g.
    /// `Y[2,q^1] Y[3,q^0] D^-1` prints as `Y[2,q^1] Yt[3,-q^0]^-1` for M = 3.
    pub fn format_paper(&self, eps: &EpsilonSeq) -> String {
        let m = eps.m();
        let mut d = self.exp_of(&VarKey::D);
        let mut y_exps: Vec<(VarKey, i64)> = Vec::new();
        let mut yt_m: Vec<(Spec, i64)> = Vec::new();
        for (k, e) in &self.exps {
            match k {
                VarKey::Y(i, a) if *i == m => {
                    let mut e = *e;
                    // D^d Y[M,a]^e with opposite signs: peel off Yt[M,-a]^d' factors.
                    if d > 0 && e < 0 {
                        let take = d.min(-e);
                        yt_m.push((a.neg(), take));
                        d -= take;
                        e += take;
                    } else if d < 0 && e > 0 {
                        let take = (-d).min(e);
                        yt_m.push((a.neg(), -take));
                        d += take;
                        e -= take;
                    }
                    if e != 0 {
                        y_exps.push((*k, e));
                    }
                }
                VarKey::D => {}
                _ => y_exps.push((*k, *e)),
            }
        }
        let mut parts: Vec<String> = Vec::new();
        let mut push = |head: String, e: i64| {
            if e == 1 {
                parts.push(head);
            } else if e != 0 {
                parts.push(format!("{head}^{e}"));
            }
        };
        for (k, e) in y_exps.iter().filter(|(k, _)| matches!(k, VarKey::Y(..))) {
            if let VarKey::Y(i, a) = k {
                push(format!("Y[{i},{a}]"), *e);
            }
        }
        for (a, e) in &yt_m {
            push(format!("Yt[{m},{a}]"), *e);
        }
        for (k, e) in y_exps.iter().filter(|(k, _)| matches!(k, VarKey::Yt(..))) {
            if let VarKey::Yt(j, a) = k {
                push(format!("Yt[{j},{a}]"), *e);
            }
        }
        push("D".to_string(), d);
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_canonical())
    }
}

/// `(D Y[M,-a]^{-1})^e`, the canonical image of `Yt[M,a]^e`.
pub fn canonicalize_yt_m(eps: &EpsilonSeq, a: Spec, e: i64) -> Monomial {
    let mut m = Monomial::one();
    m.mul_var(eps, VarKey::Yt(eps.m(), a), e)
        .expect("node M is always valid");
    m
}

/// The inverse simple ell-root `A[i,a]^{-1}` in canonical form, with the
/// conventions `Y[0,a] = 1`, `Yt[n,a] = 1`.
pub fn a_inverse(eps: &EpsilonSeq, i: usize, a: Spec) -> Result<Monomial, LWeightError> {
    let m = eps.m();
    let nodes = eps.nodes();
    if i < 1 || i > nodes {
        return Err(LWeightError::BadNode { kind: "A", node: i });
    }
    let mut out = Monomial::one();
    if i < m {
        out.mul_var(eps, VarKey::Y(i, a.mul_q(1)), -1)?;
        out.mul_var(eps, VarKey::Y(i, a.mul_q(-1)), -1)?;
        if i > 1 {
            out.mul_var(eps, VarKey::Y(i - 1, a), 1)?;
        }
        out.mul_var(eps, VarKey::Y(i + 1, a), 1)?;
    } else if i == m {
        out.mul_var(eps, VarKey::D, -1)?;
        if m > 1 {
            out.mul_var(eps, VarKey::Y(m - 1, a), 1)?;
        }
        if m < nodes {
            out.mul_var(eps, VarKey::Yt(m + 1, a), 1)?;
        }
    } else {
        out.mul_var(eps, VarKey::Yt(i, a.mul_qt(1)), -1)?;
        out.mul_var(eps, VarKey::Yt(i, a.mul_qt(-1)), -1)?;
        out.mul_var(eps, VarKey::Yt(i - 1, a), 1)?;
        if i < nodes {
            out.mul_var(eps, VarKey::Yt(i + 1, a), 1)?;
        }
    }
    Ok(out)
}

/// A `gl(n)`-weight in the delta basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight(pub Vec<i64>);

/// `wt(Y[i,a]) = d_1+..+d_i`, `wt(Yt[j,a]) = -d_{j+1}-..-d_n`,
/// `wt(D) = d_1+..+d_M - d_{M+1}-..-d_n`, extended multiplicatively.
pub fn weight(eps: &EpsilonSeq, mono: &Monomial) -> Weight {
    let n = eps.len();
    let m = eps.m();
    let mut w = vec![0i64; n];
    for (k, e) in mono.exps() {
        match k {
            VarKey::Y(i, _) => {
                for d in w.iter_mut().take(*i) {
                    *d += e;
                }
            }
            VarKey::Yt(j, _) => {
                for d in w.iter_mut().take(n).skip(*j) {
                    *d -= e;
                }
            }
            VarKey::D => {
                for (t, d) in w.iter_mut().enumerate() {
                    if t < m {
                        *d += e;
                    } else {
                        *d -= e;
                    }
                }
            }
        }
    }
    Weight(w)
}

/// Unique integers `c_i` with `wt(hw) - wt(mono) = sum_i c_i alpha_i`, or
/// `None` when the difference is outside the root lattice (nonzero
/// coordinate sum). Coefficients may be negative; cone membership is the
/// separate check `c_i >= 0`.
pub fn height_from(eps: &EpsilonSeq, hw: &Monomial, mono: &Monomial) -> Option<Vec<i64>> {
    let whw = weight(eps, hw).0;
    let wm = weight(eps, mono).0;
    let diff: Vec<i64> = whw.iter().zip(&wm).map(|(a, b)| a - b).collect();
    if diff.iter().sum::<i64>() != 0 {
        return None;
    }
    let mut c = Vec::with_capacity(diff.len() - 1);
    let mut acc = 0i64;
    for d in &diff[..diff.len() - 1] {
        acc += d;
        c.push(acc);
    }
    Some(c)
}

/// Total `A^{-1}`-height of `mono` below `hw`, when in the cone.
pub fn cone_height(eps: &EpsilonSeq, hw: &Monomial, mono: &Monomial) -> Option<u64> {
    let c = height_from(eps, hw, mono)?;
    if c.iter().any(|&x| x < 0) {
        return None;
    }
    Some(c.iter().map(|&x| x as u64).sum())
}

/// Dominance of the single-node restriction in a direction `i != M`:
/// every `Y[i,..]` (for `i < M`) resp. `Yt[i,..]` (for `i > M`) exponent
/// is nonnegative.
pub fn dominant_non_m(eps: &EpsilonSeq, mono: &Monomial, i: usize) -> Result<bool, LWeightError> {
    let m = eps.m();
    if i == m || i < 1 || i > eps.nodes() {
        return Err(LWeightError::BadNode {
            kind: "direction",
            node: i,
        });
    }
    Ok(mono.exps().all(|(k, e)| match k {
        VarKey::Y(node, _) if *node == i => *e >= 0,
        VarKey::Yt(node, _) if *node == i => *e >= 0,
        _ => true,
    }))
}

/// Admissible highest ell-weights: in canonical form `D^t prod Y^e prod Yt^f`
/// all non-`M` exponents must be nonnegative and `t` must cover the negative
/// `Y[M,..]` exponents (which stand for positive `Yt[M,..]` powers).
pub fn is_dominant_hw(eps: &EpsilonSeq, mono: &Monomial) -> bool {
    let m = eps.m();
    let mut need = 0i64;
    for (k, e) in mono.exps() {
        match k {
            VarKey::Y(node, _) if *node == m => {
                if *e < 0 {
                    need += -e;
                }
            }
            VarKey::Y(..) | VarKey::Yt(..) => {
                if *e < 0 {
                    return false;
                }
            }
            VarKey::D => {}
        }
    }
    mono.exp_of(&VarKey::D) >= need
}

/// Finite sum of monomials with positive integer multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QChar {
    terms: BTreeMap<Monomial, u64>,
}

impl QChar {
    pub fn zero() -> QChar {
        QChar::default()
    }

    pub fn from_monomial(m: Monomial) -> QChar {
        let mut c = QChar::default();
        c.add_term(m, 1);
        c
    }

    pub fn add_term(&mut self, m: Monomial, mult: u64) {
        if mult == 0 {
            return;
        }
        *self.terms.entry(m).or_insert(0) += mult;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &u64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mult_of(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Convolution product.
    pub fn mul(&self, other: &QChar) -> QChar {
        let mut out = QChar::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "terms": self
                .terms
                .iter()
                .map(|(m, c)| serde_json::json!({"m": m.format_canonical(), "mult": c}))
                .collect::<Vec<_>>()
        })
    }

    pub fn from_json(eps: &EpsilonSeq, v: &serde_json::Value) -> Result<QChar, String> {
        let terms = v
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| "expected {\"terms\": [..]}".to_string())?;
        let mut out = QChar::default();
        for t in terms {
            let m = t
                .get("m")
                .and_then(|s| s.as_str())
                .ok_or_else(|| "term missing \"m\"".to_string())?;
            let mult = t
                .get("mult")
                .and_then(|s| s.as_u64())
                .ok_or_else(|| "term missing positive \"mult\"".to_string())?;
            let mono = parse::parse_monomial(eps, m).map_err(|e| e.to_string())?;
            out.add_term(mono, mult);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps32() -> EpsilonSeq {
        EpsilonSeq::standard(3, 2).unwrap()
    }

    fn q(k: i64) -> Spec {
        Spec::q_pow(k)
    }

    fn mq(k: i64) -> Spec {
        Spec::q_pow(k).neg()
    }

    #[test]
    fn canonicalize_yt_m_examples() {
        let eps = eps32();
        let got = canonicalize_yt_m(&eps, q(0), 1);
        let mut want = Monomial::one();
        want.mul_var(&eps, VarKey::D, 1).unwrap();
        want.mul_var(&eps, VarKey::Y(3, mq(0)), -1).unwrap();
        assert_eq!(got, want);
        assert!(canonicalize_yt_m(&eps, q(5), 0).is_one());
        // Yt[M,-a]^{-1} = D^{-1} Y[M,a]
        let got = canonicalize_yt_m(&eps, mq(2), -1);
        let mut want = Monomial::one();
        want.mul_var(&eps, VarKey::D, -1).unwrap();
        want.mul_var(&eps, VarKey::Y(3, q(2)), 1).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn a_inverse_examples() {
        let eps = eps32();
        // i = M = 3: A[3,a]^{-1} = D^{-1} Y[2,a] Yt[4,a]
        let got = a_inverse(&eps, 3, q(3)).unwrap();
        let mut want = Monomial::one();
        want.mul_var(&eps, VarKey::D, -1).unwrap();
        want.mul_var(&eps, VarKey::Y(2, q(3)), 1).unwrap();
        want.mul_var(&eps, VarKey::Yt(4, q(3)), 1).unwrap();
        assert_eq!(got, want);

        // i = 1 < M: A[1,q]^{-1} = Y[1,q^0]^{-1} Y[1,q^2]^{-1} Y[2,q]
        let got = a_inverse(&eps, 1, q(1)).unwrap();
        let mut want = Monomial::one();
        want.mul_var(&eps, VarKey::Y(1, q(0)), -1).unwrap();
        want.mul_var(&eps, VarKey::Y(1, q(2)), -1).unwrap();
        want.mul_var(&eps, VarKey::Y(2, q(1)), 1).unwrap();
        assert_eq!(got, want);

        // i = 4 > M at a = -q^2: Yt[4,q]^{-1} Yt[4,q^3]^{-1} Yt[3,-q^2],
        // whose Yt[3,..] factor canonicalizes to D Y[3,q^2]^{-1}.
        let got = a_inverse(&eps, 4, mq(2)).unwrap();
        let mut want = Monomial::one();
        want.mul_var(&eps, VarKey::Yt(4, q(1)), -1).unwrap();
        want.mul_var(&eps, VarKey::Yt(4, q(3)), -1).unwrap();
        want.mul_var(&eps, VarKey::D, 1).unwrap();
        want.mul_var(&eps, VarKey::Y(3, q(2)), -1).unwrap();
        assert_eq!(got, want);

        assert!(a_inverse(&eps, 0, q(0)).is_err());
        assert!(a_inverse(&eps, 5, q(0)).is_err());
    }

    #[test]
    fn a_inverse_weight_is_minus_alpha() {
        for (m, n) in [(3, 2), (2, 1), (1, 2), (2, 3), (3, 1)] {
            let eps = EpsilonSeq::standard(m, n).unwrap();
            for i in 1..=eps.nodes() {
                for a in [q(0), q(3), mq(2), mq(-1)] {
                    let w = weight(&eps, &a_inverse(&eps, i, a).unwrap()).0;
                    let mut want = vec![0i64; eps.len()];
                    want[i - 1] = -1;
                    want[i] = 1;
                    assert_eq!(w, want, "(M,N)=({m},{n}), i={i}");
                }
            }
        }
    }

    #[test]
    fn weight_examples() {
        let eps = EpsilonSeq::standard(3, 2).unwrap();
        let mut m = Monomial::one();
        m.mul_var(&eps, VarKey::Y(1, q(0)), 1).unwrap();
        assert_eq!(weight(&eps, &m).0, vec![1, 0, 0, 0, 0]);
        let mut d = Monomial::one();
        d.mul_var(&eps, VarKey::D, 1).unwrap();
        assert_eq!(weight(&eps, &d).0, vec![1, 1, 1, -1, -1]);
    }

    #[test]
    fn height_examples() {
        let eps = eps32();
        let mut hw = Monomial::one();
        hw.mul_var(&eps, VarKey::Y(1, q(0)), 1).unwrap();
        assert_eq!(height_from(&eps, &hw, &hw), Some(vec![0, 0, 0, 0]));
        // Yt[4,q]^{-1} sits at the bottom of the 4-step chain.
        let mut low = Monomial::one();
        low.mul_var(&eps, VarKey::Yt(4, q(1)), -1).unwrap();
        assert_eq!(height_from(&eps, &hw, &low), Some(vec![1, 1, 1, 1]));
        assert_eq!(cone_height(&eps, &hw, &low), Some(4));
        // wt(Y[1,1]) - wt(D) has coordinate sum -4, hence is in the root
        // lattice span (mixed signs), not in the cone.
        let mut d = Monomial::one();
        d.mul_var(&eps, VarKey::D, 1).unwrap();
        assert_eq!(height_from(&eps, &hw, &d), Some(vec![0, -1, -2, -1]));
        assert_eq!(cone_height(&eps, &hw, &d), None);
        // A genuinely inexpressible difference: wt(Y[1,1]) itself.
        assert_eq!(height_from(&eps, &hw, &Monomial::one()), None);
    }

    #[test]
    fn dominance() {
        let eps = eps32();
        let mut m = Monomial::one();
        m.mul_var(&eps, VarKey::Y(1, q(0)), 1).unwrap();
        assert!(dominant_non_m(&eps, &m, 1).unwrap());
        let mut m2 = Monomial::one();
        m2.mul_var(&eps, VarKey::Y(1, q(2)), -1).unwrap();
        m2.mul_var(&eps, VarKey::Y(2, q(1)), 1).unwrap();
        assert!(!dominant_non_m(&eps, &m2, 1).unwrap());
        assert!(dominant_non_m(&eps, &m2, 2).unwrap());
        assert!(dominant_non_m(&eps, &m2, 4).unwrap());
        assert!(dominant_non_m(&eps, &m2, 3).is_err());
    }

    #[test]
    fn dominant_hw_with_yt_m_cover() {
        let eps = EpsilonSeq::standard(2, 1).unwrap();
        // Y[1,1] Yt[2,-q] = Y[1,1] Y[2,q]^{-1} D is dominant.
        let mut hw = Monomial::one();
        hw.mul_var(&eps, VarKey::Y(1, q(0)), 1).unwrap();
        hw.mul_var(&eps, VarKey::Yt(2, mq(1)), 1).unwrap();
        assert!(is_dominant_hw(&eps, &hw));
        // Y[2,q]^{-1} alone is not.
        let mut bad = Monomial::one();
        bad.mul_var(&eps, VarKey::Y(2, q(1)), -1).unwrap();
        assert!(!is_dominant_hw(&eps, &bad));
        // Neither is Y[1,1]^{-1} D^5.
        let mut bad = Monomial::one();
        bad.mul_var(&eps, VarKey::Y(1, q(0)), -1).unwrap();
        bad.mul_var(&eps, VarKey::D, 5).unwrap();
        assert!(!is_dominant_hw(&eps, &bad));
    }

    #[test]
    fn monomial_cancellation() {
        let eps = eps32();
        let mut m = Monomial::one();
        m.mul_var(&eps, VarKey::Y(2, q(1)), 3).unwrap();
        m.mul_var(&eps, VarKey::Yt(4, mq(0)), -2).unwrap();
        m.mul_var(&eps, VarKey::D, 1).unwrap();
        assert!(m.mul(&m.inv()).is_one());
        assert_eq!(m.pow(0), Monomial::one());
        assert_eq!(m.pow(2), m.mul(&m));
    }

    #[test]
    fn qchar_convolution() {
        let eps = eps32();
        let mut a = QChar::zero();
        let y1 = {
            let mut m = Monomial::one();
            m.mul_var(&eps, VarKey::Y(1, q(0)), 1).unwrap();
            m
        };
        let y2 = {
            let mut m = Monomial::one();
            m.mul_var(&eps, VarKey::Y(2, q(1)), 1).unwrap();
            m
        };
        a.add_term(y1.clone(), 1);
        a.add_term(y2.clone(), 2);
        let prod = a.mul(&a);
        // (y1 + 2 y2)^2 = y1^2 + 4 y1 y2 + 4 y2^2
        assert_eq!(prod.mult_of(&y1.pow(2)), 1);
        assert_eq!(prod.mult_of(&y1.mul(&y2)), 4);
        assert_eq!(prod.mult_of(&y2.pow(2)), 4);
        assert_eq!(prod.dimension(), 9);
        // JSON round trip
        let back = QChar::from_json(&eps, &prod.to_json()).unwrap();
        assert_eq!(back, prod);
    }

    #[test]
    fn paper_display() {
        let eps = eps32();
        // Y[2,q] Y[3,q^0] D^{-1}  ->  Y[2,q^1] Yt[3,-q^0]^-1
        let mut m = Monomial::one();
        m.mul_var(&eps, VarKey::Y(2, q(1)), 1).unwrap();
        m.mul_var(&eps, VarKey::Y(3, q(0)), 1).unwrap();
        m.mul_var(&eps, VarKey::D, -1).unwrap();
        assert_eq!(m.format_paper(&eps), "Y[2,q^1] Yt[3,-q^0]^-1");
        // Round-trip through the parser reproduces the monomial.
        let back = parse::parse_monomial(&eps, &m.format_paper(&eps)).unwrap();
        assert_eq!(back, m);
    }
}
