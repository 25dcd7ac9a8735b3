//! Text form of quantum homology classes: `T- + 2*pt@e^{-F}`, `(1/2)*pt`,
//! `F@e^{(7/12)F}`. Labels are matched greedily against the basis.

use crate::error::{QhError, Result};
use crate::linalg;
use crate::manifold::{ManifoldModel, QHClass};
use crate::novikov::{Exp, H2Lattice};
use crate::rational::{parse_q, Q};
use num_traits::One;

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> QhError {
        QhError::Parse(format!("{what} at column {} of {:?}", self.pos + 1, self.s))
    }

    fn sign(&mut self) -> Q {
        let mut s = Q::one();
        loop {
            if self.eat('-') {
                s = -s;
            } else if !self.eat('+') {
                return s;
            }
        }
    }

    /// `(p/q)` or `p` or `p/q`; with `star`, only when followed by `*`.
    fn coefficient(&mut self, star: bool) -> Result<Option<Q>> {
        self.skip_ws();
        let start = self.pos;
        let r = self.rest();
        let text = if let Some(inner) = r.strip_prefix('(') {
            let close = inner.find(')').ok_or_else(|| self.err("unclosed parenthesis"))?;
            self.pos += close + 2;
            &inner[..close]
        } else {
            let len = r.find(|c: char| !(c.is_ascii_digit() || c == '/')).unwrap_or(r.len());
            if len == 0 {
                return Ok(None);
            }
            self.pos += len;
            &r[..len]
        };
        if star {
            if !self.eat('*') {
                self.pos = start;
                return Ok(None);
            }
        } else {
            self.eat('*');
        }
        parse_q(text).map(Some).map_err(|e| self.err(&e.to_string()))
    }

    fn name(&mut self, names: &[String]) -> Option<usize> {
        self.skip_ws();
        let r = self.rest();
        let best = names.iter().enumerate().filter(|(_, n)| !n.is_empty() && r.starts_with(n.as_str())).max_by_key(|(_, n)| n.len());
        best.map(|(i, n)| {
            self.pos += n.len();
            i
        })
    }
}

/// `Σ c_g g` over the generators of `lat`, e.g. `(7/12)F`, `-F`, `2F - T`, `0`.
pub fn parse_exp(text: &str, lat: &H2Lattice) -> Result<Exp> {
    let mut c = Cursor { s: text, pos: 0 };
    let mut coords = linalg::zero_vec(lat.rank());
    c.skip_ws();
    if c.rest().trim() == "0" {
        return Ok(Exp::zero());
    }
    loop {
        let s = c.sign();
        let k = c.coefficient(false)?.unwrap_or_else(Q::one);
        let g = c.name(&lat.generators).ok_or_else(|| c.err("expected a generator"))?;
        coords[g] += s * k;
        c.skip_ws();
        if c.rest().is_empty() {
            return Ok(lat.key(&coords));
        }
        if !c.rest().starts_with(['+', '-']) {
            return Err(c.err("expected + or -"));
        }
    }
}

/// A class `Σ c·label@e^{exp}`; exponents are read against `lat`.
pub fn parse_class(text: &str, m: &ManifoldModel, lat: &H2Lattice) -> Result<QHClass> {
    let labels: Vec<String> = m.basis.iter().map(|b| b.label.clone()).collect();
    let mut c = Cursor { s: text, pos: 0 };
    let mut out = QHClass::zero();
    c.skip_ws();
    if c.rest().trim() == "0" {
        return Ok(out);
    }
    loop {
        let s = c.sign();
        let k = c.coefficient(true)?.unwrap_or_else(Q::one);
        let i = c.name(&labels).ok_or_else(|| c.err("expected a basis label"))?;
        let mut e = Exp::zero();
        if c.eat('@') {
            c.skip_ws();
            let r = c.rest();
            if !r.starts_with("e^{") {
                return Err(c.err("expected e^{...}"));
            }
            let close = r.find('}').ok_or_else(|| c.err("unclosed exponent"))?;
            e = parse_exp(&r[3..close], lat)?;
            c.pos += close + 1;
        }
        out.add_scalar_term(e, m.dim(), i, s * k);
        c.skip_ws();
        if c.rest().is_empty() {
            return Ok(out);
        }
        if !c.rest().starts_with(['+', '-']) {
            return Err(c.err("expected + or -"));
        }
    }
}
