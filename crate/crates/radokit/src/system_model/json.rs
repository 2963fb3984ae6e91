//! Bit-exact JSON file formats.
//!
//! System file: {"d": int, "k": int, "blocks": [[[int, ...], ...], ...]}
//! with blocks[j-1][i-1] = a_{j,i}, inner arrays of length d. Integers are
//! JSON numbers when |x| < 2^53 and decimal strings otherwise. Serialization
//! is canonical: fixed key order, compact separators, so parse then
//! serialize reproduces canonical files byte for byte.

use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use super::{Assignment, DkSystem};
use crate::colorings::{ColorId, TableColoring};
use crate::error::{Error, ParseError};
use crate::exact_linalg::{Int, IntVector};

/// Largest magnitude an integer may have as a JSON number: 2^53 - 1.
const MAX_JSON_NUMBER: i64 = (1 << 53) - 1;

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(ParseError::Json(e.to_string()))
}

/// Render an integer per the file conventions.
pub(crate) fn int_to_json(n: &Int) -> Value {
    match n.to_i64() {
        Some(v) if v.abs() <= MAX_JSON_NUMBER => Value::from(v),
        _ => Value::String(n.to_string()),
    }
}

/// Read an integer: a JSON number with |x| < 2^53, or a decimal string.
pub(crate) fn int_from_json(v: &Value, path: &str) -> Result<Int, Error> {
    match v {
        Value::Number(n) => {
            let as_i64 = n
                .as_i64()
                .or_else(|| n.as_u64().and_then(|u| i64::try_from(u).ok()));
            match as_i64 {
                Some(x) if x.abs() <= MAX_JSON_NUMBER => Ok(Int::from(x)),
                Some(_) => Err(Error::Parse(ParseError::NumberTooLarge {
                    path: path.to_string(),
                })),
                // Floats (including exponent forms) are not integers here.
                None => Err(Error::Parse(ParseError::NotAnInteger {
                    path: path.to_string(),
                })),
            }
        }
        Value::String(s) => parse_decimal(s).ok_or_else(|| {
            Error::Parse(ParseError::BadIntegerString {
                path: path.to_string(),
            })
        }),
        _ => Err(Error::Parse(ParseError::WrongType {
            path: path.to_string(),
            expected: "integer (number or decimal string)",
        })),
    }
}

fn parse_decimal(s: &str) -> Option<Int> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<Int>().ok()
}

fn get_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, Error> {
    obj.get(key).ok_or_else(|| {
        Error::Parse(ParseError::MissingField {
            path: key.to_string(),
        })
    })
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, Error> {
    v.as_object().ok_or_else(|| {
        Error::Parse(ParseError::WrongType {
            path: path.to_string(),
            expected: "object",
        })
    })
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, Error> {
    v.as_array().ok_or_else(|| {
        Error::Parse(ParseError::WrongType {
            path: path.to_string(),
            expected: "array",
        })
    })
}

fn small_dim(v: &Value, path: &str) -> Result<usize, Error> {
    let n = int_from_json(v, path)?;
    n.to_usize().filter(|&x| x >= 1).ok_or_else(|| {
        Error::Parse(ParseError::BadDimension {
            path: path.to_string(),
        })
    })
}

/// Parse a system file.
pub fn parse_system(bytes: &[u8]) -> Result<DkSystem, Error> {
    let root: Value = serde_json::from_slice(bytes).map_err(json_error)?;
    let obj = as_object(&root, "$")?;
    let d = small_dim(get_field(obj, "d")?, "d")?;
    let k = small_dim(get_field(obj, "k")?, "k")?;
    let blocks_v = as_array(get_field(obj, "blocks")?, "blocks")?;
    if blocks_v.len() != k {
        return Err(Error::Parse(ParseError::BlockCount {
            expected: k,
            got: blocks_v.len(),
        }));
    }
    let mut blocks: Vec<Vec<IntVector>> = Vec::with_capacity(k);
    for (j, block_v) in blocks_v.iter().enumerate() {
        let block_path = format!("blocks[{j}]");
        let vecs = as_array(block_v, &block_path)?;
        if vecs.is_empty() {
            return Err(Error::Parse(ParseError::EmptyBlock { path: block_path }));
        }
        let mut block: Vec<IntVector> = Vec::with_capacity(vecs.len());
        for (i, vec_v) in vecs.iter().enumerate() {
            let vec_path = format!("blocks[{j}][{i}]");
            let entries = as_array(vec_v, &vec_path)?;
            if entries.len() != d {
                return Err(Error::Parse(ParseError::VectorLength {
                    path: vec_path,
                    expected: d,
                    got: entries.len(),
                }));
            }
            let mut v: IntVector = Vec::with_capacity(d);
            for (e, entry) in entries.iter().enumerate() {
                v.push(int_from_json(entry, &format!("blocks[{j}][{i}][{e}]"))?);
            }
            block.push(v);
        }
        blocks.push(block);
    }
    DkSystem::new(d, blocks)
}

/// Canonical serialization of a system.
pub fn serialize_system(s: &DkSystem) -> String {
    let mut obj = Map::new();
    obj.insert("d".into(), Value::from(s.dim() as u64));
    obj.insert("k".into(), Value::from(s.group_count() as u64));
    let blocks: Vec<Value> = (0..s.group_count())
        .map(|j| {
            let vecs: Vec<Value> = (0..s.group_size(j))
                .map(|i| Value::Array(s.coeff(j, i).iter().map(int_to_json).collect()))
                .collect();
            Value::Array(vecs)
        })
        .collect();
    obj.insert("blocks".into(), Value::Array(blocks));
    Value::Object(obj).to_string()
}

/// Parse a coloring file: {"window": [lo, hi], "colors": {"<int>": id, ..}}
/// total on its window.
pub fn parse_coloring(bytes: &[u8]) -> Result<TableColoring, Error> {
    let root: Value = serde_json::from_slice(bytes).map_err(json_error)?;
    let obj = as_object(&root, "$")?;
    let window = as_array(get_field(obj, "window")?, "window")?;
    if window.len() != 2 {
        return Err(Error::Parse(ParseError::BadWindow {
            reason: format!("expected [lo, hi], got {} entries", window.len()),
        }));
    }
    let lo = int_from_json(&window[0], "window[0]")?;
    let hi = int_from_json(&window[1], "window[1]")?;
    let (lo, hi) = match (lo.to_i64(), hi.to_i64()) {
        (Some(lo), Some(hi)) if lo <= hi => (lo, hi),
        (Some(lo), Some(hi)) => {
            return Err(Error::Parse(ParseError::BadWindow {
                reason: format!("lo = {lo} > hi = {hi}"),
            }))
        }
        _ => {
            return Err(Error::Parse(ParseError::BadWindow {
                reason: "window bounds out of range".into(),
            }))
        }
    };
    let colors_obj = as_object(get_field(obj, "colors")?, "colors")?;
    let mut colors: Vec<Option<ColorId>> = vec![None; (hi - lo + 1) as usize];
    for (key, val) in colors_obj {
        let z: i64 = key.parse().map_err(|_| {
            Error::Parse(ParseError::BadIntegerString {
                path: format!("colors.{key}"),
            })
        })?;
        if z < lo || z > hi {
            return Err(Error::Parse(ParseError::BadWindow {
                reason: format!("color given for {z} outside [{lo}, {hi}]"),
            }));
        }
        let id = val.as_u64().ok_or_else(|| {
            Error::Parse(ParseError::BadColor {
                path: format!("colors.{key}"),
            })
        })?;
        colors[(z - lo) as usize] = Some(id);
    }
    let mut table = Vec::with_capacity(colors.len());
    for (i, c) in colors.into_iter().enumerate() {
        match c {
            Some(id) => table.push(id),
            None => {
                return Err(Error::Parse(ParseError::WindowNotTotal {
                    missing: lo + i as i64,
                }))
            }
        }
    }
    TableColoring::new(lo, hi, table)
}

/// Canonical serialization of a table coloring: keys ascending from lo.
pub fn serialize_coloring(t: &TableColoring) -> String {
    let (lo, hi) = t.window();
    let mut obj = Map::new();
    obj.insert(
        "window".into(),
        Value::Array(vec![Value::from(lo), Value::from(hi)]),
    );
    let mut colors = Map::new();
    for (z, c) in t.entries() {
        colors.insert(z.to_string(), Value::from(c));
    }
    obj.insert("colors".into(), Value::Object(colors));
    Value::Object(obj).to_string()
}

/// Solution output: {"values": [[int, ...], ...], "colors": [id, ...]}.
pub fn solution_to_json(a: &Assignment, colors: &[ColorId]) -> Value {
    let mut obj = Map::new();
    let values: Vec<Value> = a
        .groups()
        .iter()
        .map(|g| Value::Array(g.iter().map(int_to_json).collect()))
        .collect();
    obj.insert("values".into(), Value::Array(values));
    obj.insert(
        "colors".into(),
        Value::Array(colors.iter().map(|&c| Value::from(c)).collect()),
    );
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER: &str =
        r#"{"d":2,"k":2,"blocks":[[[2,1],[2,3]],[[-5,7],[10,-2]]]}"#;

    #[test]
    fn parse_paper_example() {
        let s = parse_system(PAPER.as_bytes()).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.group_count(), 2);
        assert_eq!(s.group_sizes(), vec![2, 2]);
        assert_eq!(*s.coeff(1, 0), vec![Int::from(-5), Int::from(7)]);
    }

    #[test]
    fn parse_schur() {
        let s = parse_system(br#"{"d":1,"k":1,"blocks":[[[1],[1],[-1]]]}"#).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.group_sizes(), vec![3]);
    }

    #[test]
    fn parse_errors_name_paths() {
        let ragged = br#"{"d":2,"k":1,"blocks":[[[1],[1,2]]]}"#;
        match parse_system(ragged) {
            Err(Error::Parse(ParseError::VectorLength { path, expected, got })) => {
                assert_eq!(path, "blocks[0][0]");
                assert_eq!((expected, got), (2, 1));
            }
            other => panic!("expected VectorLength, got {other:?}"),
        }

        let wrong_k = br#"{"d":1,"k":2,"blocks":[[[1]]]}"#;
        assert!(matches!(
            parse_system(wrong_k),
            Err(Error::Parse(ParseError::BlockCount { expected: 2, got: 1 }))
        ));

        let empty = br#"{"d":1,"k":1,"blocks":[[]]}"#;
        assert!(matches!(
            parse_system(empty),
            Err(Error::Parse(ParseError::EmptyBlock { .. }))
        ));

        let float = br#"{"d":1,"k":1,"blocks":[[[1.5]]]}"#;
        assert!(matches!(
            parse_system(float),
            Err(Error::Parse(ParseError::NotAnInteger { .. }))
        ));

        let missing = br#"{"d":1,"blocks":[[[1]]]}"#;
        assert!(matches!(
            parse_system(missing),
            Err(Error::Parse(ParseError::MissingField { .. }))
        ));
    }

    #[test]
    fn big_integers_round_trip_as_strings() {
        let big = r#"{"d":1,"k":1,"blocks":[[["9007199254740992"],[1]]]}"#;
        let s = parse_system(big.as_bytes()).unwrap();
        assert_eq!(*s.coeff(0, 0), vec![Int::from(1u64 << 53)]);
        assert_eq!(serialize_system(&s), big);

        // The same magnitude as a bare number is rejected.
        let too_big = br#"{"d":1,"k":1,"blocks":[[[9007199254740992]]]}"#;
        assert!(matches!(
            parse_system(too_big),
            Err(Error::Parse(ParseError::NumberTooLarge { .. }))
        ));
    }

    #[test]
    fn serialize_is_canonical() {
        let s = parse_system(PAPER.as_bytes()).unwrap();
        assert_eq!(serialize_system(&s), PAPER);
        // Round trip from non-canonical spacing / key order.
        let shuffled = br#"{ "blocks": [[[2,1],[2,3]],[[-5,7],[10,-2]]], "k": 2, "d": 2 }"#;
        let s2 = parse_system(shuffled).unwrap();
        assert_eq!(serialize_system(&s2), PAPER);
    }

    #[test]
    fn coloring_round_trip() {
        let text = r#"{"window":[-2,2],"colors":{"-2":0,"-1":1,"0":0,"1":1,"2":0}}"#;
        let t = parse_coloring(text.as_bytes()).unwrap();
        assert_eq!(t.color(0).unwrap(), 0);
        assert_eq!(serialize_coloring(&t), text);

        let missing = br#"{"window":[-1,1],"colors":{"-1":0,"1":0}}"#;
        assert!(matches!(
            parse_coloring(missing),
            Err(Error::Parse(ParseError::WindowNotTotal { missing: 0 }))
        ));
    }
}
