//! Text forms for algebra elements, loop modes and module states:
//! "a(-2)b(-1)|0>", "w[2]", "c(-1)", "D^2 w + 3*c". Generator names are
//! matched greedily against the algebra, so names like "e*" tokenize
//! correctly.

use crate::cycfield::scalar::CycScalar;
use crate::modes::LoopElem;
use crate::verma::{from_mode_list, ModuleKind, State};
use crate::vla::{VlaElem, VlaPresentation};
use crate::{EngineError, Result};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(EngineError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn parse_integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        let bytes = self.text.as_bytes();
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let piece = &self.text[start..end];
        match piece.parse::<i64>() {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(_) => self.err(format!("expected an integer, found '{piece}'")),
        }
    }

    /// Rational "p", "p/q", or cyclotomic "[p/q, ...]".
    fn parse_coefficient(&mut self, t: u32) -> Result<CycScalar> {
        self.skip_ws();
        if self.rest().starts_with('[') {
            let close = self
                .rest()
                .find(']')
                .ok_or(EngineError::Parse { pos: self.pos, msg: "unclosed '['".into() })?;
            let piece = &self.rest()[..=close];
            let value = CycScalar::parse(t, piece)?;
            self.pos += close + 1;
            return Ok(value);
        }
        let start = self.pos;
        let mut end = self.pos;
        let bytes = self.text.as_bytes();
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'/') {
            end += 1;
        }
        let piece = &self.text[start..end];
        match CycScalar::parse(t, piece) {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(_) => self.err(format!("expected a coefficient, found '{piece}'")),
        }
    }

    /// Greedy longest match over the algebra's generator names.
    fn parse_generator(&mut self, alg: &VlaPresentation) -> Option<usize> {
        self.skip_ws();
        let mut best: Option<(usize, usize)> = None;
        for (i, g) in alg.generators.iter().enumerate() {
            if self.rest().starts_with(g.name.as_str()) {
                match best {
                    Some((_, len)) if len >= g.name.len() => {}
                    _ => best = Some((i, g.name.len())),
                }
            }
        }
        best.map(|(i, len)| {
            self.pos += len;
            i
        })
    }

    fn peek_central(&mut self, alg: &VlaPresentation) -> bool {
        self.skip_ws();
        // Central only matches when no generator name is a longer prefix.
        if !self.rest().starts_with(alg.central_name.as_str()) {
            return false;
        }
        !alg.generators
            .iter()
            .any(|g| g.name.len() > alg.central_name.len() && self.rest().starts_with(g.name.as_str()))
    }

    /// "(n)" or "[n]"; square brackets carry the degree shift
    /// a[n] = a(n + deg a - 1).
    fn parse_mode_suffix(&mut self, alg: &VlaPresentation, g: usize) -> Result<i64> {
        if self.eat("(") {
            let n = self.parse_integer()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            Ok(n)
        } else if self.eat("[") {
            let n = self.parse_integer()?;
            if !self.eat("]") {
                return self.err("expected ']'");
            }
            Ok(n + alg.gen_degree(g) as i64 - 1)
        } else {
            self.err("expected '(' or '[' after generator name")
        }
    }

    fn starts_coefficient(&mut self) -> bool {
        self.skip_ws();
        self.rest()
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_digit() || c == '[')
    }
}

/// Parse a module state "a(-2)b(-1)|0>" or sums like
/// "2*a(-1)|0> + [0,1]*b(-2)|0>". Bracketed modes a[n] are accepted too.
pub fn parse_state(alg: &VlaPresentation, kind: ModuleKind, text: &str) -> Result<State> {
    let mut cur = Cursor::new(text);
    let mut total = State::zero(kind);
    loop {
        let mut sign = CycScalar::one();
        while cur.eat("-") {
            sign = sign.neg();
        }
        let mut coeff = sign;
        if cur.starts_coefficient() {
            coeff = coeff.mul(&cur.parse_coefficient(alg.order)?);
            cur.eat("*");
        }
        let mut modes = vec![];
        loop {
            if cur.eat("|0>") {
                break;
            }
            let Some(g) = cur.parse_generator(alg) else {
                return cur.err("expected a generator name or '|0>'");
            };
            let n = cur.parse_mode_suffix(alg, g)?;
            modes.push((g, n));
        }
        let built = from_mode_list(alg, kind, &modes)?;
        total = total.add(&built.scale(&coeff));
        if cur.at_end() {
            break;
        }
        if !cur.eat("+") {
            return cur.err("expected '+' between terms");
        }
    }
    Ok(total)
}

/// Parse a loop element "w(2) + 1/2*c(-1)", with a[n] mode shifts.
pub fn parse_loop_elem(alg: &VlaPresentation, text: &str) -> Result<LoopElem> {
    let mut cur = Cursor::new(text);
    let mut total = LoopElem::zero();
    loop {
        let mut sign = CycScalar::one();
        while cur.eat("-") {
            sign = sign.neg();
        }
        let mut coeff = sign;
        if cur.starts_coefficient() {
            coeff = coeff.mul(&cur.parse_coefficient(alg.order)?);
            cur.eat("*");
        }
        if cur.peek_central(alg) {
            cur.pos += alg.central_name.len();
            if !cur.eat("(-1)") {
                return cur.err("the central element only has mode (-1)");
            }
            total.central = total.central.add(&coeff);
        } else {
            let Some(g) = cur.parse_generator(alg) else {
                return cur.err("expected a generator or central name");
            };
            let n = cur.parse_mode_suffix(alg, g)?;
            total.insert(g, n, coeff);
        }
        if cur.at_end() {
            break;
        }
        if !cur.eat("+") {
            return cur.err("expected '+' between terms");
        }
    }
    Ok(total)
}

/// Parse an algebra element "D^2 w + 3*c" or "D D w".
pub fn parse_vla_elem(alg: &VlaPresentation, text: &str) -> Result<VlaElem> {
    let mut cur = Cursor::new(text);
    let mut total = VlaElem::zero();
    loop {
        let mut sign = CycScalar::one();
        while cur.eat("-") {
            sign = sign.neg();
        }
        let mut coeff = sign;
        if cur.starts_coefficient() {
            coeff = coeff.mul(&cur.parse_coefficient(alg.order)?);
            cur.eat("*");
        }
        let mut dpow = 0u32;
        loop {
            cur.skip_ws();
            // 'D' must not shadow a generator whose name starts with D.
            let shadowed = alg.generators.iter().any(|g| cur.rest().starts_with(g.name.as_str()));
            if !shadowed && cur.eat("D") {
                if cur.eat("^") {
                    dpow += cur.parse_integer()? as u32;
                } else {
                    dpow += 1;
                }
            } else {
                break;
            }
        }
        if cur.peek_central(alg) {
            cur.pos += alg.central_name.len();
            if dpow > 0 {
                return cur.err("D kills the central element");
            }
            total = total.add(&VlaElem::central(coeff));
        } else {
            let Some(g) = cur.parse_generator(alg) else {
                return cur.err("expected a generator or central name");
            };
            total = total.add(&VlaElem::term(g, dpow, coeff));
        }
        if cur.at_end() {
            break;
        }
        if !cur.eat("+") {
            return cur.err("expected '+' between terms");
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vla::{heisenberg_sl2, virasoro};

    #[test]
    fn parse_states() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let s = parse_state(&heis, ModuleKind::Untwisted, "e(-1)e*(-1)|0>").unwrap();
        assert_eq!(s.depth(), 2);
        let t = parse_state(&heis, ModuleKind::Untwisted, "3/2*e(-1)|0> + h(-2)|0>").unwrap();
        assert_eq!(t.depth(), 1);
        // Square-bracket modes shift by the degree: w[-2] = w(-1).
        let vir = virasoro(1, None).unwrap();
        let a = parse_state(&vir, ModuleKind::Untwisted, "w[-2]|0>").unwrap();
        let b = parse_state(&vir, ModuleKind::Untwisted, "w(-1)|0>").unwrap();
        assert_eq!(a, b);
        assert!(parse_state(&heis, ModuleKind::Untwisted, "q(-1)|0>").is_err());
    }

    #[test]
    fn parse_modes() {
        let vir = virasoro(1, None).unwrap();
        let x = parse_loop_elem(&vir, "w[2]").unwrap();
        assert_eq!(x, LoopElem::mode(0, 3));
        let y = parse_loop_elem(&vir, "4*w[0] + 1/2*c(-1)").unwrap();
        let mut want = LoopElem::mode(0, 1).scale(&CycScalar::from_int(4));
        want.central = CycScalar::parse(1, "1/2").unwrap();
        assert_eq!(y, want);
    }

    #[test]
    fn parse_algebra_elements() {
        let vir = virasoro(1, None).unwrap();
        let x = parse_vla_elem(&vir, "D^2 w + 3*c").unwrap();
        let want = VlaElem::term(0, 2, CycScalar::one()).add(&VlaElem::central(CycScalar::from_int(3)));
        assert_eq!(x, want);
        assert_eq!(parse_vla_elem(&vir, "D D w").unwrap(), VlaElem::term(0, 2, CycScalar::one()));
    }

    #[test]
    fn star_generator_names_tokenize() {
        let heis = heisenberg_sl2(2, None).unwrap();
        let x = parse_loop_elem(&heis, "2*e*(-3)").unwrap();
        let want = LoopElem::mode(1, -3).scale(&CycScalar::from_int(2));
        assert_eq!(x, want);
    }
}
