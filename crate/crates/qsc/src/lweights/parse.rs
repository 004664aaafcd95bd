//! Text grammar for monomials:
//!
//! ```text
//! monomial := term (ws term)* | "1"
//! term     := var ("^" int)?
//! var      := "Y[" node "," spec "]" | "Yt[" node "," spec "]" | "D"
//! spec     := ("o" uint ":")? "-"? ("q^" int | "qt^" int | "1")
//! ```
//!
//! Parsing canonicalizes (`Yt[M,..]` is rewritten on the spot), so
//! `parse(format(m)) = m` for any canonical monomial `m`.

use crate::cartan::EpsilonSeq;

use super::{LWeightError, Monomial, Sign, Spec, VarKey};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> LWeightError {
        LWeightError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), LWeightError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.s[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn int(&mut self) -> Result<i64, LWeightError> {
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && !self.s[start].is_ascii_digit()) {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn uint(&mut self) -> Result<u64, LWeightError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected unsigned integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn spec(&mut self) -> Result<Spec, LWeightError> {
        let mut orbit = 0u32;
        // orbit tag "o<k>:" (saved point; "o" could not start anything else)
        if self.peek() == Some(b'o') {
            self.pos += 1;
            let v = self.uint()?;
            orbit = u32::try_from(v).map_err(|_| self.err("orbit out of range"))?;
            self.eat(b':')?;
        }
        let mut sign = Sign::Plus;
        if self.peek() == Some(b'-') {
            sign = Sign::Minus;
            self.pos += 1;
        }
        if self.eat_str("qt^") {
            let k = self.int()?;
            // qt^k = (-1)^k q^{-k}
            let s = if k.rem_euclid(2) == 1 {
                sign.flip()
            } else {
                sign
            };
            return Ok(Spec {
                orbit,
                sign: s,
                exp: -k,
            });
        }
        if self.eat_str("q^") {
            let k = self.int()?;
            return Ok(Spec {
                orbit,
                sign,
                exp: k,
            });
        }
        if self.eat_str("1") {
            return Ok(Spec {
                orbit,
                sign,
                exp: 0,
            });
        }
        Err(self.err("expected spectral parameter ('q^k', 'qt^k' or '1')"))
    }

    fn term(&mut self, eps: &EpsilonSeq, out: &mut Monomial) -> Result<(), LWeightError> {
        let key = if self.eat_str("Yt[") {
            let node = self.uint()? as usize;
            self.eat(b',')?;
            let a = self.spec()?;
            self.eat(b']')?;
            VarKey::Yt(node, a)
        } else if self.eat_str("Y[") {
            let node = self.uint()? as usize;
            self.eat(b',')?;
            let a = self.spec()?;
            self.eat(b']')?;
            VarKey::Y(node, a)
        } else if self.eat_str("D") {
            VarKey::D
        } else {
            return Err(self.err("expected 'Y[', 'Yt[' or 'D'"));
        };
        let e = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.int()?
        } else {
            1
        };
        out.mul_var(eps, key, e).map_err(|e| match e {
            LWeightError::BadNode { kind, node } => LWeightError::Syntax {
                pos: self.pos,
                msg: format!("variable {kind}[{node},..] out of range for this epsilon"),
            },
            other => other,
        })
    }
}

/// Parse a bare spectral parameter, e.g. `q^2`, `-q^-1`, `qt^3`, `1`.
pub fn parse_spec(text: &str) -> Result<Spec, LWeightError> {
    let mut cur = Cursor::new(text.trim());
    let s = cur.spec()?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input after spectral parameter"));
    }
    Ok(s)
}

/// Parse a whitespace-separated product of variable powers into a canonical
/// monomial. The literal `"1"` denotes the identity.
pub fn parse_monomial(eps: &EpsilonSeq, text: &str) -> Result<Monomial, LWeightError> {
    let mut cur = Cursor::new(text);
    let mut out = Monomial::one();
    cur.skip_ws();
    if cur.peek() == Some(b'1') && {
        // bare "1" only when it is the entire remaining token
        let rest = &cur.s[cur.pos + 1..];
        rest.iter().all(|b| *b == b' ' || *b == b'\t')
    } {
        return Ok(out);
    }
    if cur.peek().is_none() {
        return Err(cur.err("empty monomial (write '1' for the identity)"));
    }
    while cur.peek().is_some() {
        cur.term(eps, &mut out)?;
        let before = cur.pos;
        cur.skip_ws();
        if cur.peek().is_some() && cur.pos == before {
            return Err(cur.err("expected whitespace between factors"));
        }
    }
    Ok(out)
}
