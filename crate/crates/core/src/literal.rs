//! Text form of sets: `p=11;{0,1,2}` for residue sets, `{0,1,3}` for integer sets.
//! Whitespace is ignored everywhere.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::residue::{IntegerSet, ResidueSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetLiteral {
    Residue(ResidueSet),
    Integer(IntegerSet),
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_braced(body: &str) -> Result<Vec<i64>> {
    let inner = body
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| parse_err(format!("expected {{...}}, got {body:?}")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| parse_err(format!("bad element {tok:?}")))
        })
        .collect()
}

impl FromStr for SetLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.split_once(';') {
            Some((head, body)) => {
                let p = head
                    .strip_prefix("p=")
                    .ok_or_else(|| parse_err(format!("expected p=<prime>, got {head:?}")))?
                    .parse::<i64>()
                    .map_err(|_| parse_err(format!("bad modulus in {head:?}")))?;
                let elems = parse_braced(body)?;
                Ok(SetLiteral::Residue(ResidueSet::from_integers(p, &elems)?))
            }
            None => Ok(SetLiteral::Integer(IntegerSet::from(parse_braced(&compact)?))),
        }
    }
}

impl SetLiteral {
    pub fn into_residue(self) -> Result<ResidueSet> {
        match self {
            SetLiteral::Residue(r) => Ok(r),
            SetLiteral::Integer(_) => Err(parse_err("expected a residue set literal p=<prime>;{...}")),
        }
    }
}

pub fn parse_residue_set(s: &str) -> Result<ResidueSet> {
    s.parse::<SetLiteral>()?.into_residue()
}

pub fn parse_integer_set(s: &str) -> Result<IntegerSet> {
    match s.parse::<SetLiteral>()? {
        SetLiteral::Integer(i) => Ok(i),
        SetLiteral::Residue(_) => Err(parse_err("expected an integer set literal {...}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_kinds() {
        let r = parse_residue_set(" p = 11 ; { 0, 1 ,2 } ").unwrap();
        assert_eq!(r.modulus(), 11);
        assert_eq!(r.elements(), &[0, 1, 2]);
        let i = parse_integer_set("{3, -1,0}").unwrap();
        assert_eq!(i.elements(), &[-1, 0, 3]);
        assert!(parse_residue_set("p=5;{}").unwrap().is_empty());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_residue_set("q=11;{0}"), Err(Error::Parse(_))));
        assert!(matches!(parse_residue_set("p=11;{0,x}"), Err(Error::Parse(_))));
        assert!(matches!(parse_residue_set("p=11;0,1"), Err(Error::Parse(_))));
        assert_eq!(parse_residue_set("p=9;{1}"), Err(Error::CompositeModulus(9)));
        assert!(parse_residue_set("{0,1}").is_err());
        assert!(parse_integer_set("p=7;{0,1}").is_err());
    }

    #[test]
    fn display_roundtrip() {
        let r = parse_residue_set("p=13;{12,0,5}").unwrap();
        assert_eq!(parse_residue_set(&r.to_string()).unwrap(), r);
    }
}
