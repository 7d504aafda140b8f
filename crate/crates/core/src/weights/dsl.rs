//! Text form of weight families.
//!
//! ```text
//! family  := kind ':' param (',' param)*
//! param   := key '=' value
//! value   := rational | '[' family ']' | '[' entry (';' entry)* ']'
//! entry   := integer '=' rational
//! ```
//!
//! | kind        | keys                         |
//! |-------------|------------------------------|
//! | `powerlaw`  | `alpha`                      |
//! | `constant`  | `value`                      |
//! | `exptail`   | `pos`, `neg`                 |
//! | `piecewise` | `split`, `neg=[..]`, `pos=[..]` |
//! | `table`     | `values=[n=v;..]`, `tail=[..]` |
//!
//! Rationals are written `3`, `-1/2`, `0.25` or `1e-2`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;

use super::WeightFamily;
use crate::error::{Error, Result};
use crate::scalar::parse_rational;

/// Parses and validates a family.
pub fn parse_family(text: &str) -> Result<WeightFamily> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let family = p.family()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    family.validate()?;
    Ok(family)
}

/// Canonical text; `parse_family(&render_family(f)) == f` for valid `f`.
pub fn render_family(family: &WeightFamily) -> String {
    match family {
        WeightFamily::PowerLaw { alpha } => format!("powerlaw:alpha={}", alpha),
        WeightFamily::Constant { value } => format!("constant:value={}", value),
        WeightFamily::ExpTail { pos, neg } => format!("exptail:pos={},neg={}", pos, neg),
        WeightFamily::Piecewise { neg, pos, split } => format!(
            "piecewise:split={},neg=[{}],pos=[{}]",
            split,
            render_family(neg),
            render_family(pos)
        ),
        WeightFamily::Table { values, tail } => {
            let entries: Vec<String> = values.iter().map(|(n, v)| format!("{}={}", n, v)).collect();
            let mut out = format!("table:values=[{}]", entries.join(";"));
            if let Some(t) = tail {
                out.push_str(&format!(",tail=[{}]", render_family(t)));
            }
            out
        }
    }
}

enum Value {
    Scalar(String, usize),
    Nested(WeightFamily),
    Entries(BTreeMap<i64, BigRational>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).to_ascii_lowercase())
    }

    fn atom(&mut self, stops: &[u8]) -> (String, usize) {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| !stops.contains(&b)) {
            self.pos += 1;
        }
        (String::from_utf8_lossy(&self.src[start..self.pos]).trim().to_string(), start)
    }

    fn family(&mut self) -> Result<WeightFamily> {
        let kind_pos = self.pos;
        let kind = self.ident()?;
        self.expect(b':')?;
        let mut params: Vec<(String, usize, Value)> = Vec::new();
        loop {
            let key_pos = self.pos;
            let key = self.ident()?;
            if params.iter().any(|(k, _, _)| *k == key) {
                return Err(Error::Syntax { pos: key_pos, msg: format!("duplicate key '{}'", key) });
            }
            self.expect(b'=')?;
            self.skip_ws();
            let value = if self.peek() == Some(b'[') {
                self.pos += 1;
                self.skip_ws();
                let v = if key == "values" { Value::Entries(self.entries()?) } else { Value::Nested(self.family()?) };
                self.expect(b']')?;
                v
            } else {
                let (text, at) = self.atom(b",]");
                if text.is_empty() {
                    return Err(Error::Syntax { pos: at, msg: format!("missing value for '{}'", key) });
                }
                Value::Scalar(text, at)
            };
            params.push((key, key_pos, value));
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                _ => break,
            }
        }
        build(&kind, kind_pos, params)
    }

    fn entries(&mut self) -> Result<BTreeMap<i64, BigRational>> {
        let mut map = BTreeMap::new();
        self.skip_ws();
        if self.peek() == Some(b']') {
            return Ok(map);
        }
        loop {
            let (index, at) = self.atom(b"=]");
            let n: i64 = index
                .parse()
                .map_err(|_| Error::Syntax { pos: at, msg: format!("bad table index '{}'", index) })?;
            self.expect(b'=')?;
            let (text, at) = self.atom(b";]");
            let v = parse_rational(&text)
                .ok_or_else(|| Error::Syntax { pos: at, msg: format!("bad rational '{}'", text) })?;
            if map.insert(n, v).is_some() {
                return Err(Error::Syntax { pos: at, msg: format!("duplicate table index {}", n) });
            }
            self.skip_ws();
            match self.peek() {
                Some(b';') => self.pos += 1,
                _ => return Ok(map),
            }
        }
    }
}

fn build(kind: &str, kind_pos: usize, params: Vec<(String, usize, Value)>) -> Result<WeightFamily> {
    let allowed: &[&str] = match kind {
        "powerlaw" => &["alpha"],
        "constant" => &["value"],
        "exptail" => &["pos", "neg"],
        "piecewise" => &["split", "neg", "pos"],
        "table" => &["values", "tail"],
        _ => return Err(Error::Syntax { pos: kind_pos, msg: format!("unknown family kind '{}'", kind) }),
    };
    let mut scalars: BTreeMap<String, BigRational> = BTreeMap::new();
    let mut nested: BTreeMap<String, WeightFamily> = BTreeMap::new();
    let mut entries = None;
    for (key, key_pos, value) in params {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Syntax { pos: key_pos, msg: format!("unknown key '{}' for {}", key, kind) });
        }
        let nested_key = matches!((kind, key.as_str()), ("piecewise", "neg" | "pos") | ("table", "tail"));
        match value {
            Value::Scalar(text, at) if !nested_key && key != "values" => {
                let r = parse_rational(&text)
                    .ok_or_else(|| Error::Syntax { pos: at, msg: format!("bad rational '{}'", text) })?;
                scalars.insert(key, r);
            }
            Value::Nested(f) if nested_key => {
                nested.insert(key, f);
            }
            Value::Entries(map) if key == "values" => entries = Some(map),
            _ => {
                return Err(Error::Syntax { pos: key_pos, msg: format!("wrong value shape for '{}'", key) });
            }
        }
    }
    let missing = |key: &str| Error::Syntax { pos: kind_pos, msg: format!("{} requires '{}'", kind, key) };
    let mut scalar = |key: &str| scalars.remove(key).ok_or_else(|| missing(key));
    Ok(match kind {
        "powerlaw" => WeightFamily::PowerLaw { alpha: scalar("alpha")? },
        "constant" => WeightFamily::Constant { value: scalar("value")? },
        "exptail" => WeightFamily::ExpTail { pos: scalar("pos")?, neg: scalar("neg")? },
        "piecewise" => {
            let split = scalar("split")?;
            if !split.is_integer() {
                return Err(Error::InvalidFamily(format!("piecewise split must be an integer, got {}", split)));
            }
            let split = i64::try_from(split.to_integer())
                .map_err(|_| Error::InvalidFamily("piecewise split out of range".into()))?;
            let neg = nested.remove("neg").ok_or_else(|| missing("neg"))?;
            let pos = nested.remove("pos").ok_or_else(|| missing("pos"))?;
            WeightFamily::piecewise(neg, pos, split)
        }
        _ => {
            let tail = nested.remove("tail").ok_or_else(|| missing("tail"))?;
            WeightFamily::table(entries.unwrap_or_default(), tail)
        }
    })
}
