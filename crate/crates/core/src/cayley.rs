//! Plain-text Cayley table format.
//!
//! ```text
//! n
//! g <count> <gen_1> ... <gen_count>     (optional; default: all elements)
//! <row 0: n indices>
//! ...
//! <row n-1>
//! ```
//!
//! Row `i`, column `j` holds `i * j`; indices are 0-based and 0 must be the
//! identity.

use crate::error::{Error, Result};
use crate::group::Group;

pub fn parse_cayley(text: &str) -> Result<Group> {
    parse_cayley_named(text, "cayley")
}

pub fn parse_cayley_named(text: &str, name: impl Into<String>) -> Result<Group> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, first) = lines.next().ok_or_else(|| Error::format(1, "empty input"))?;
    let order: usize = first
        .parse()
        .map_err(|_| Error::format(line_no, format!("expected the order, found {first:?}")))?;
    if order == 0 {
        return Err(Error::format(line_no, "order must be positive"));
    }

    let parse_index = |line: usize, tok: &str| -> Result<usize> {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::format(line, format!("expected an index, found {tok:?}")))?;
        if v >= order {
            return Err(Error::format(
                line,
                format!("index {v} out of range for order {order}"),
            ));
        }
        Ok(v)
    };

    let mut generators = None;
    let mut table = Vec::with_capacity(order * order);
    let mut rows = 0;
    for (line_no, line) in lines {
        let mut toks = line.split_whitespace().peekable();
        if toks.peek() == Some(&"g") {
            if generators.is_some() || rows > 0 {
                return Err(Error::format(line_no, "generator line must precede the table"));
            }
            toks.next();
            let count: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::format(line_no, "generator line needs a count"))?;
            let gens = toks
                .map(|t| parse_index(line_no, t))
                .collect::<Result<Vec<_>>>()?;
            if gens.len() != count || count == 0 {
                return Err(Error::format(
                    line_no,
                    format!("generator count {count} does not match {} indices", gens.len()),
                ));
            }
            generators = Some(gens);
            continue;
        }
        if rows == order {
            return Err(Error::format(line_no, "more rows than the declared order"));
        }
        let row = toks
            .map(|t| parse_index(line_no, t))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != order {
            return Err(Error::format(
                line_no,
                format!("row has {} entries, expected {order}", row.len()),
            ));
        }
        table.extend(row.into_iter().map(|v| v as u32));
        rows += 1;
    }
    if rows != order {
        return Err(Error::format(
            text.lines().count().max(1),
            format!("found {rows} rows, expected {order}"),
        ));
    }
    Group::from_table(name, order, table, generators)
}

/// Serializes a dense carrier, including its generator line.
pub fn serialize_cayley(group: &Group) -> Result<String> {
    let table = group.table().ok_or_else(|| {
        Error::Capacity(format!("{} has no dense table to serialize", group.name()))
    })?;
    let n = group.order();
    let mut out = format!("{n}\n");
    let gens = group.generators();
    out.push_str(&format!("g {}", gens.len()));
    for g in gens {
        out.push_str(&format!(" {g}"));
    }
    out.push('\n');
    for row in table.chunks(n) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct, cyclic};

    #[test]
    fn cyclic_two_text() {
        let text = serialize_cayley(&cyclic(2).unwrap()).unwrap();
        assert_eq!(text, "2\ng 1 1\n0 1\n1 0\n");
        let g = parse_cayley(&text).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.generators(), &[1]);
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn generator_line_optional() {
        let g = parse_cayley("2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.generators(), &[0, 1]);
    }

    #[test]
    fn out_of_range_index() {
        let err = parse_cayley("2\n0 2\n1 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Format {
                line: 2,
                message: "index 2 out of range for order 2".into()
            }
        );
    }

    #[test]
    fn ragged_and_malformed() {
        assert!(matches!(parse_cayley("2\n0 1\n1\n"), Err(Error::Format { line: 3, .. })));
        assert!(matches!(parse_cayley("two\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(parse_cayley("2\n0 1\n"), Err(Error::Format { .. })));
        assert!(matches!(parse_cayley("2\n0 x\n1 0\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(
            parse_cayley("2\ng 2 1\n0 1\n1 0\n"),
            Err(Error::Format { line: 2, .. })
        ));
    }

    #[test]
    fn axiom_failure() {
        assert!(matches!(parse_cayley("2\n0 1\n1 1\n"), Err(Error::GroupAxiom(_))));
    }

    #[test]
    fn round_trip_nonabelian() {
        for s in ["sym(4)", "dicyclic(12)", "heis(3)", "product(dihedral(8),cyclic(3))"] {
            let g = construct(&s.parse().unwrap()).unwrap();
            let back = parse_cayley(&serialize_cayley(&g).unwrap()).unwrap();
            assert_eq!(back.table(), g.table());
            assert_eq!(back.generators(), g.generators());
        }
    }
}
