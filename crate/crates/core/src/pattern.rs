//! Subsets of the 4x4 lattice and the combinatorial PPT criteria.
//!
//! Bit `4β + α` holds the point `(α, β)`. The text form is four rows of
//! `x` (in the subset) and `.` (not in it), top row β = 3; hex masks (`0x9b77`) and point lists
//! (`(0,0) (1,2)`) are accepted as well.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::LatticePoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pattern(u16);

impl Pattern {
    pub const FULL: Pattern = Pattern(0xffff);

    pub const fn new(mask: u16) -> Self {
        Pattern(mask)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    /// N_I.
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, p: LatticePoint) -> bool {
        self.0 >> p.bit() & 1 == 1
    }

    pub fn with(self, p: LatticePoint) -> Pattern {
        Pattern(self.0 | 1 << p.bit())
    }

    pub fn toggled(self, p: LatticePoint) -> Pattern {
        Pattern(self.0 ^ 1 << p.bit())
    }

    pub fn complement(self) -> Pattern {
        Pattern(!self.0)
    }

    pub fn from_points<I: IntoIterator<Item = LatticePoint>>(points: I) -> Self {
        Pattern(points.into_iter().fold(0, |m, p| m | 1 << p.bit()))
    }

    /// Points in bit order.
    pub fn points(self) -> impl Iterator<Item = LatticePoint> {
        (0..16u8)
            .filter(move |b| self.0 >> b & 1 == 1)
            .map(LatticePoint::from_bit)
    }

    pub fn hex(self) -> String {
        format!("0x{:04x}", self.0)
    }

    /// Four lines, top row β = 3, no trailing newline.
    pub fn render(self) -> String {
        (0..4u8)
            .rev()
            .map(|beta| {
                (0..4u8)
                    .map(|alpha| {
                        if self.0 >> (4 * beta + alpha) & 1 == 1 {
                            'x'
                        } else {
                            '.'
                        }
                    })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_pattern(text)
    }

    pub fn profile(self) -> RowColProfile {
        let mut row_counts = [0u32; 4];
        let mut col_counts = [0u32; 4];
        for p in self.points() {
            row_counts[p.beta() as usize] += 1;
            col_counts[p.alpha() as usize] += 1;
        }
        RowColProfile {
            row_counts,
            col_counts,
        }
    }

    /// Points of the pattern on the column and row through `p`, not
    /// counting `p` itself.
    pub fn line_count(self, p: LatticePoint) -> u32 {
        let profile = self.profile();
        profile.line_count(p, self.contains(p))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

impl FromStr for Pattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_pattern(s)
    }
}

/// Canonical text of a grid input: blank lines and spaces dropped, `X`
/// lowercased. `Pattern::parse(x)?.render() == normalize_grid(x)` for every
/// valid grid `x`.
pub fn normalize_grid(text: &str) -> String {
    text.lines()
        .map(|l| {
            l.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| c.to_ascii_lowercase())
                .collect::<String>()
        })
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_pattern(text: &str) -> Result<Pattern> {
    let start = text
        .lines()
        .enumerate()
        .find_map(|(ln, l)| l.find(|c: char| !c.is_whitespace()).map(|col| (ln, col)));
    let Some((line, col)) = start else {
        return Err(Error::parse(1, 1, "empty pattern text"));
    };
    let first = text.lines().nth(line).unwrap_or_default();
    let rest = &first[col..];
    if rest.starts_with("0x") || rest.starts_with("0X") {
        parse_hex(text, line, col)
    } else if rest.starts_with('(') {
        parse_pairs(text)
    } else {
        parse_grid(text)
    }
}

fn parse_hex(text: &str, line: usize, col: usize) -> Result<Pattern> {
    if let Some((ln, l)) = text
        .lines()
        .enumerate()
        .skip(line + 1)
        .find(|(_, l)| !l.trim().is_empty())
    {
        let c = l.find(|c: char| !c.is_whitespace()).unwrap_or(0);
        return Err(Error::parse(
            ln + 1,
            c + 1,
            "unexpected text after hex mask",
        ));
    }
    let l = text.lines().nth(line).unwrap_or_default();
    let digits = l[col + 2..].trim_end();
    if digits.is_empty() {
        return Err(Error::parse(line + 1, col + 3, "missing hex digits"));
    }
    if let Some(i) = digits.find(|c: char| !c.is_ascii_hexdigit()) {
        return Err(Error::parse(line + 1, col + 3 + i, "invalid hex digit"));
    }
    if digits.len() > 4 {
        return Err(Error::parse(
            line + 1,
            col + 3 + 4,
            "mask wider than 16 bits",
        ));
    }
    let mask = u16::from_str_radix(digits, 16)
        .map_err(|e| Error::parse(line + 1, col + 3, e.to_string()))?;
    Ok(Pattern(mask))
}

fn parse_pairs(text: &str) -> Result<Pattern> {
    let mut mask = 0u16;
    for (ln, l) in text.lines().enumerate() {
        let chars: Vec<char> = l.chars().collect();
        let mut i = 0;
        let err = |i: usize, m: &str| Error::parse(ln + 1, i + 1, m);
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == ',' || c == ';' {
                i += 1;
                continue;
            }
            if c != '(' {
                return Err(err(i, "expected '('"));
            }
            let mut coords = [0u8; 2];
            i += 1;
            for (k, slot) in coords.iter_mut().enumerate() {
                while i < chars.len() && chars[i] == ' ' {
                    i += 1;
                }
                match chars.get(i) {
                    Some(d @ '0'..='3') => *slot = *d as u8 - b'0',
                    Some(d) if d.is_ascii_digit() => {
                        return Err(err(i, "coordinate out of range 0..=3"))
                    }
                    _ => return Err(err(i, "expected a coordinate")),
                }
                i += 1;
                while i < chars.len() && chars[i] == ' ' {
                    i += 1;
                }
                let want = if k == 0 { ',' } else { ')' };
                if chars.get(i) != Some(&want) {
                    return Err(err(i, &format!("expected '{want}'")));
                }
                i += 1;
            }
            mask |= 1 << (4 * coords[1] + coords[0]);
        }
    }
    Ok(Pattern(mask))
}

fn parse_grid(text: &str) -> Result<Pattern> {
    let mut rows: Vec<u8> = Vec::new();
    let mut last_line = 0;
    for (ln, l) in text.lines().enumerate() {
        if l.trim().is_empty() {
            continue;
        }
        last_line = ln;
        if rows.len() == 4 {
            return Err(Error::parse(ln + 1, 1, "more than 4 rows"));
        }
        let mut bits = 0u8;
        let mut cells = 0;
        for (col, c) in l.chars().enumerate() {
            let v = match c {
                'x' | 'X' => 1,
                '.' => 0,
                c if c.is_whitespace() => continue,
                _ => {
                    return Err(Error::parse(
                        ln + 1,
                        col + 1,
                        format!("unexpected character {c:?}, expected 'x' or '.'"),
                    ))
                }
            };
            if cells == 4 {
                return Err(Error::parse(ln + 1, col + 1, "more than 4 cells in row"));
            }
            bits |= v << cells;
            cells += 1;
        }
        if cells < 4 {
            return Err(Error::parse(
                ln + 1,
                l.len() + 1,
                format!("row has {cells} cells, expected 4"),
            ));
        }
        rows.push(bits);
    }
    if rows.len() < 4 {
        return Err(Error::parse(
            last_line + 2,
            1,
            format!("grid has {} rows, expected 4", rows.len()),
        ));
    }
    // first row is β = 3
    let mask = rows
        .iter()
        .enumerate()
        .fold(0u16, |m, (k, &r)| m | (r as u16) << (4 * (3 - k)));
    Ok(Pattern(mask))
}

/// Number of pattern points on each row R_β and column C_α.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowColProfile {
    pub row_counts: [u32; 4],
    pub col_counts: [u32; 4],
}

impl RowColProfile {
    fn line_count(&self, p: LatticePoint, member: bool) -> u32 {
        let own = if member { 2 } else { 0 };
        self.col_counts[p.alpha() as usize] + self.row_counts[p.beta() as usize] - own
    }
}

/// Outcome of the combinatorial PPT test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PptCheck {
    pub ppt: bool,
    /// When not PPT: the point with the largest line count (lowest bit on ties).
    pub violating_point: Option<LatticePoint>,
}

/// ρ_I is PPT iff every point sees at most N_I/2 pattern points on its row
/// and column, itself excluded.
pub fn ppt_combinatorial(pattern: Pattern) -> Result<PptCheck> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let n = pattern.len();
    let profile = pattern.profile();
    let mut worst: Option<(u32, LatticePoint)> = None;
    for p in LatticePoint::all() {
        let c = profile.line_count(p, pattern.contains(p));
        if 2 * c > n && worst.is_none_or(|(w, _)| c > w) {
            worst = Some((c, p));
        }
    }
    Ok(PptCheck {
        ppt: worst.is_none(),
        violating_point: worst.map(|(_, p)| p),
    })
}

/// A point outside the pattern whose row and column meet the pattern in
/// exactly one point (lowest bit first).
pub fn prop_ppt2_point(pattern: Pattern) -> Option<LatticePoint> {
    let profile = pattern.profile();
    LatticePoint::all().find(|&p| !pattern.contains(p) && profile.line_count(p, false) == 1)
}

/// Label `(μ, ν)` with `k^{μν} = 1`, where `k^{μν}` counts the pattern
/// points on the row and column through `(μ⊕2, ν⊕2)`, that point itself
/// excluded and irrespective of whether it belongs to the pattern.
pub fn prop_ppt3_point(pattern: Pattern) -> Option<LatticePoint> {
    let profile = pattern.profile();
    LatticePoint::all().find(|&label| {
        let centre = LatticePoint::from_bit(label.bit() ^ 0b1010);
        profile.line_count(centre, pattern.contains(centre)) == 1
    })
}

/// `k^{μν}` for a label `(μ, ν)`.
pub fn ppt3_k(pattern: Pattern, label: LatticePoint) -> u32 {
    let centre = LatticePoint::from_bit(label.bit() ^ 0b1010);
    pattern.line_count(centre)
}
