//! Group spec strings (`Z6`, `Z2xZ4`, or `Z` for the integers) and set
//! literals (`{0,1,3}`, `{(0,1),(1,0)}`).
//!
//! Positions in error messages are 1-based character columns.

use crate::error::{Error, Result};
use crate::group::{FinAbGroup, GroupElem};
use crate::set::GSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// The integers, handled by embedding into a large enough cyclic group.
    Integers,
    Product(Vec<u32>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FinAbGroup> {
        match self {
            GroupSpec::Product(orders) => FinAbGroup::product(orders),
            GroupSpec::Integers => Err(Error::InvalidGroup(
                "Z (the integers) has no finite realization on its own".into(),
            )),
        }
    }
}

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return Err(perr(1, "empty group spec"));
    }
    if chars.len() == 1 && chars[0].eq_ignore_ascii_case(&'z') {
        return Ok(GroupSpec::Integers);
    }
    let mut orders = Vec::new();
    let mut pos = 0;
    loop {
        if !chars.get(pos).is_some_and(|c| c.eq_ignore_ascii_case(&'z')) {
            return Err(perr(pos + 1, "expected 'Z'"));
        }
        pos += 1;
        let start = pos;
        while chars.get(pos).is_some_and(|c| c.is_ascii_digit()) {
            pos += 1;
        }
        if start == pos {
            return Err(perr(pos + 1, "expected a factor order after 'Z'"));
        }
        let digits: String = chars[start..pos].iter().collect();
        let n: u32 = digits
            .parse()
            .map_err(|_| perr(start + 1, format!("factor order {digits} is too large")))?;
        orders.push(n);
        match chars.get(pos) {
            None => break,
            Some(c) if c.eq_ignore_ascii_case(&'x') => pos += 1,
            Some(c) => return Err(perr(pos + 1, format!("unexpected character {c:?}"))),
        }
    }
    Ok(GroupSpec::Product(orders))
}

/// An element as written, with the column where it starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawElem {
    pub position: usize,
    pub coords: Vec<i64>,
    pub tuple: bool,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(perr(self.column(), format!("expected '{want}', found {c:?}"))),
            None => Err(perr(self.column(), format!("expected '{want}', found end of input"))),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return Err(match self.chars.get(start) {
                Some(c) => perr(start + 1, format!("expected an integer, found {c:?}")),
                None => perr(start + 1, "expected an integer, found end of input"),
            });
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| perr(start + 1, format!("integer {text} is out of range")))
    }

    fn elem(&mut self) -> Result<RawElem> {
        self.skip_ws();
        let position = self.column();
        if self.peek() == Some('(') {
            self.pos += 1;
            let mut coords = vec![self.integer()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                coords.push(self.integer()?);
            }
            self.expect(')')?;
            Ok(RawElem {
                position,
                coords,
                tuple: true,
            })
        } else {
            Ok(RawElem {
                position,
                coords: vec![self.integer()?],
                tuple: false,
            })
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(perr(self.column(), format!("unexpected trailing {c:?}"))),
        }
    }
}

/// Parses `{e1,e2,...}` without interpreting the elements.
pub fn parse_raw_set(text: &str) -> Result<Vec<RawElem>> {
    let mut cur = Cursor::new(text);
    cur.expect('{')?;
    let mut out = Vec::new();
    if cur.peek() == Some('}') {
        cur.pos += 1;
        cur.finish()?;
        return Ok(out);
    }
    loop {
        out.push(cur.elem()?);
        match cur.peek() {
            Some(',') => cur.pos += 1,
            Some('}') => {
                cur.pos += 1;
                break;
            }
            Some(c) => return Err(perr(cur.column(), format!("expected ',' or '}}', found {c:?}"))),
            None => return Err(perr(cur.column(), "unterminated set literal")),
        }
    }
    cur.finish()?;
    Ok(out)
}

fn to_group_elem(g: &FinAbGroup, raw: &RawElem) -> Result<GroupElem> {
    let factors = g.factor_orders().ok_or_else(|| {
        Error::InvalidGroup("literals can only be read in product groups".into())
    })?;
    if raw.coords.len() != factors.len() {
        return Err(perr(
            raw.position,
            format!(
                "element has {} coordinate(s), {} needs {}",
                raw.coords.len(),
                g.spec(),
                factors.len()
            ),
        ));
    }
    let mut coords = Vec::with_capacity(factors.len());
    for (&c, &n) in raw.coords.iter().zip(factors) {
        if c < 0 || c >= n as i64 {
            return Err(perr(
                raw.position,
                format!("element {c} is out of range for Z{n}"),
            ));
        }
        coords.push(c as u32);
    }
    Ok(GroupElem::new(coords))
}

pub fn parse_set_literal(g: &FinAbGroup, text: &str) -> Result<GSet> {
    let elems = parse_raw_set(text)?
        .iter()
        .map(|raw| to_group_elem(g, raw))
        .collect::<Result<Vec<_>>>()?;
    GSet::from_elems(g, &elems)
}

pub fn parse_elem_literal(g: &FinAbGroup, text: &str) -> Result<GroupElem> {
    let mut cur = Cursor::new(text);
    let raw = cur.elem()?;
    cur.finish()?;
    to_group_elem(g, &raw)
}

/// A set of integers, for the `Z` group spec. Tuples are rejected.
pub fn parse_integer_set(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for raw in parse_raw_set(text)? {
        if raw.tuple {
            return Err(perr(raw.position, "integer sets cannot contain tuples"));
        }
        out.push(raw.coords[0]);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
