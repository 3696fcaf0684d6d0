//! ASCII grid format: `#` is a cell, `.` is empty space, the first line is
//! the top row. Leading and trailing blank lines are ignored and every
//! remaining row must have the same length.

use crate::error::{Error, Result};
use crate::region::{Cell, Region};

pub fn parse_region(text: &str) -> Result<Region> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .collect();
    let first = lines.iter().position(|(_, l)| !l.trim().is_empty());
    let last = lines.iter().rposition(|(_, l)| !l.trim().is_empty());
    let (first, last) = match (first, last) {
        (Some(f), Some(l)) => (f, l),
        _ => return Ok(Region::empty()),
    };
    let body = &lines[first..=last];
    let width = body[0].1.chars().count();
    let height = body.len() as i32;
    let mut cells = Vec::new();
    for (row, (line_no, line)) in body.iter().enumerate() {
        let y = height - 1 - row as i32;
        let mut len = 0;
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '#' => cells.push(Cell::new(col as i32, y)),
                '.' => {}
                other => {
                    return Err(Error::Parse {
                        line: *line_no,
                        column: col + 1,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
            len = col + 1;
        }
        if len != width {
            return Err(Error::Parse {
                line: *line_no,
                column: len.min(width) + 1,
                message: format!("ragged row: expected {width} columns, found {len}"),
            });
        }
    }
    Ok(Region::new(cells).normalized())
}

/// Canonical text for a region: its bounding box, top row first, one line
/// per row, each line terminated by a newline. The empty region emits "".
pub fn emit_region(region: &Region) -> String {
    render_with(region, |c| region.contains(c).then_some('#'))
}

/// Render the bounding box of `region`, asking `mark` for each cell; cells
/// with no mark render as `.`.
pub fn render_with(region: &Region, mark: impl Fn(Cell) -> Option<char>) -> String {
    let Some((lo, hi)) = region.bounds() else {
        return String::new();
    };
    let mut out = String::new();
    for y in (lo.y..=hi.y).rev() {
        for x in lo.x..=hi.x {
            out.push(mark(Cell::new(x, y)).unwrap_or('.'));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::rectangle;
    use proptest::prelude::*;

    #[test]
    fn parses_a_square() {
        assert_eq!(parse_region("##\n##").unwrap(), rectangle(2, 2).unwrap());
        assert_eq!(
            parse_region("\n\n##\n##\n\n").unwrap(),
            rectangle(2, 2).unwrap()
        );
    }

    #[test]
    fn top_line_is_the_highest_row() {
        let r = parse_region("#.\n##").unwrap();
        assert!(r.contains(Cell::new(0, 1)));
        assert!(!r.contains(Cell::new(1, 1)));
    }

    #[test]
    fn canonical_round_trip() {
        let s = "##.\n###";
        assert_eq!(emit_region(&parse_region(s).unwrap()), "##.\n###\n");
    }

    #[test]
    fn rejects_bad_characters_and_ragged_rows() {
        match parse_region("#x") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 2)),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_region("###\n#") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn blank_input_is_empty() {
        assert!(parse_region("\n  \n").unwrap().is_empty());
        assert_eq!(emit_region(&Region::empty()), "");
    }

    proptest! {
        #[test]
        fn emit_then_parse_is_identity(cells in proptest::collection::btree_set((0i32..7, 0i32..7), 0..30)) {
            let region = Region::new(cells.into_iter().map(Cell::from)).normalized();
            let back = parse_region(&emit_region(&region)).unwrap();
            prop_assert!(back.same_cells(&region));
        }
    }
}
