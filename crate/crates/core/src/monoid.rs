//! The 18-element commutative monoid that governs misere sums of boards.
//!
//! Generated by `a, b, c, d` subject to
//!
//! ```text
//! a^2 = 1, b^3 = b, b^2 c = c, c^3 = a c^2, b^2 d = d, c d = a d, d^2 = c^2
//! ```
//!
//! Since the monoid is commutative a word is just an exponent vector, and the
//! relations become integer rewrites on that vector.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

/// Number of elements.
pub const ORDER: usize = 18;

/// A reduced word `a^i b^j c^k d^l`.
///
/// Normal forms satisfy `i <= 1`, `j <= 2`, `k <= 2`, `l <= 1`, and
/// `j = 2` excludes `c` and `d`, `l = 1` excludes `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MonoidElement {
    i: u8,
    j: u8,
    k: u8,
    l: u8,
}

impl MonoidElement {
    pub const ONE: MonoidElement = MonoidElement::raw(0, 0, 0, 0);
    pub const A: MonoidElement = MonoidElement::raw(1, 0, 0, 0);
    pub const B: MonoidElement = MonoidElement::raw(0, 1, 0, 0);
    pub const C: MonoidElement = MonoidElement::raw(0, 0, 1, 0);
    pub const D: MonoidElement = MonoidElement::raw(0, 0, 0, 1);
    pub const B2: MonoidElement = MonoidElement::raw(0, 2, 0, 0);
    pub const BC: MonoidElement = MonoidElement::raw(0, 1, 1, 0);
    pub const C2: MonoidElement = MonoidElement::raw(0, 0, 2, 0);
    pub const AC2: MonoidElement = MonoidElement::raw(1, 0, 2, 0);

    const fn raw(i: u8, j: u8, k: u8, l: u8) -> MonoidElement {
        MonoidElement { i, j, k, l }
    }

    /// Exponents of `a`, `b`, `c`, `d`.
    pub const fn exponents(self) -> (u8, u8, u8, u8) {
        (self.i, self.j, self.k, self.l)
    }

    pub fn multiply(self, other: MonoidElement) -> MonoidElement {
        tables().elements[tables().mul[self.index()][other.index()] as usize]
    }

    pub fn pow(self, n: u32) -> MonoidElement {
        (0..n).fold(MonoidElement::ONE, |acc, _| acc.multiply(self))
    }

    pub fn is_p(self) -> bool {
        P_SET.contains(&self)
    }

    /// Position of this element in [`elements`].
    pub fn index(self) -> usize {
        tables().index_of[slot(self)] as usize
    }

    pub fn from_index(index: usize) -> Option<MonoidElement> {
        tables().elements.get(index).copied()
    }
}

/// The four elements marking previous-player wins: `a`, `b^2`, `bc`, `c^2`.
pub const P_SET: [MonoidElement; 4] = [
    MonoidElement::A,
    MonoidElement::B2,
    MonoidElement::BC,
    MonoidElement::C2,
];

pub fn is_p(x: MonoidElement) -> bool {
    x.is_p()
}

pub fn multiply(x: MonoidElement, y: MonoidElement) -> MonoidElement {
    x.multiply(y)
}

/// Rewrites an arbitrary exponent vector to its normal form.
pub fn reduce(i: u64, j: u64, k: u64, l: u64) -> MonoidElement {
    let (mut i, mut j, mut k, mut l) = (i, j, k, l);
    loop {
        let before = (i, j, k, l);
        i %= 2;
        // b^3 = b
        if j >= 3 {
            j = if j % 2 == 1 { 1 } else { 2 };
        }
        // b^2 c = c, b^2 d = d
        if j >= 2 && (k >= 1 || l >= 1) {
            j -= 2;
        }
        // d^2 = c^2
        if l >= 2 {
            let n = l / 2;
            l -= 2 * n;
            k += 2 * n;
        }
        // c d = a d
        if k >= 1 && l >= 1 {
            let n = k.min(l);
            k -= n;
            i += n;
        }
        // c^3 = a c^2
        if k >= 3 {
            i += k - 2;
            k = 2;
        }
        if (i, j, k, l) == before {
            break;
        }
    }
    MonoidElement::raw(i as u8, j as u8, k as u8, l as u8)
}

fn slot(x: MonoidElement) -> usize {
    ((x.i as usize * 3 + x.j as usize) * 3 + x.k as usize) * 2 + x.l as usize
}

struct Tables {
    elements: Vec<MonoidElement>,
    index_of: [u8; 36],
    mul: [[u8; ORDER]; ORDER],
}

fn raw_product(x: MonoidElement, y: MonoidElement) -> MonoidElement {
    reduce(
        (x.i + y.i) as u64,
        (x.j + y.j) as u64,
        (x.k + y.k) as u64,
        (x.l + y.l) as u64,
    )
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        // Closure of the generators under multiplication.
        let generators = [
            MonoidElement::A,
            MonoidElement::B,
            MonoidElement::C,
            MonoidElement::D,
        ];
        let mut elements = vec![MonoidElement::ONE];
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier];
            frontier += 1;
            for g in generators {
                let y = raw_product(x, g);
                if !elements.contains(&y) {
                    elements.push(y);
                }
            }
        }
        elements.sort();
        assert_eq!(elements.len(), ORDER, "presentation closure changed size");
        let mut index_of = [u8::MAX; 36];
        for (n, &x) in elements.iter().enumerate() {
            index_of[slot(x)] = n as u8;
        }
        let mut mul = [[0u8; ORDER]; ORDER];
        for (r, &x) in elements.iter().enumerate() {
            for (c, &y) in elements.iter().enumerate() {
                mul[r][c] = index_of[slot(raw_product(x, y))];
            }
        }
        Tables {
            elements,
            index_of,
            mul,
        }
    })
}

/// The 18 normal forms sorted by exponent tuple `(i, j, k, l)`.
pub fn elements() -> &'static [MonoidElement] {
    &tables().elements
}

/// Index-level multiplication for the inner loops of the solvers.
#[inline]
pub(crate) fn mul_index(x: u8, y: u8) -> u8 {
    tables().mul[x as usize][y as usize]
}

/// Bitmask over element indices of the P-set.
pub(crate) fn p_mask() -> u32 {
    static MASK: OnceLock<u32> = OnceLock::new();
    *MASK.get_or_init(|| P_SET.iter().fold(0, |m, x| m | 1 << x.index()))
}

/// 18x18 multiplication table as CSV with rendered row and column headers.
pub fn multiplication_table_csv() -> String {
    let els = elements();
    let mut out = String::from("*");
    for y in els {
        out.push(',');
        out.push_str(&y.to_string());
    }
    out.push('\n');
    for &x in els {
        out.push_str(&x.to_string());
        for &y in els {
            out.push(',');
            out.push_str(&x.multiply(y).to_string());
        }
        out.push('\n');
    }
    out
}

/// A bijection of the monoid onto itself that respects multiplication,
/// stored as the image of each element index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism([u8; ORDER]);

impl Automorphism {
    pub fn apply(&self, x: MonoidElement) -> MonoidElement {
        MonoidElement::from_index(self.0[x.index()] as usize).unwrap()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &y)| i == y as usize)
    }

    pub fn preserves_p(&self) -> bool {
        P_SET.iter().all(|&x| self.apply(x).is_p())
    }
}

/// All automorphisms of the monoid, identity first.
///
/// An automorphism is fixed by the images of the four generators, so this
/// tries every assignment of generator images, extends it through the normal
/// forms, and keeps the bijective homomorphisms.
pub fn automorphisms() -> &'static [Automorphism] {
    static AUTS: OnceLock<Vec<Automorphism>> = OnceLock::new();
    AUTS.get_or_init(|| {
        let els = elements();
        let mut out = Vec::new();
        for &ga in els {
            if ga.pow(2) != MonoidElement::ONE {
                continue;
            }
            for &gb in els {
                for &gc in els {
                    for &gd in els {
                        let image: Vec<MonoidElement> = els
                            .iter()
                            .map(|x| {
                                ga.pow(x.i as u32)
                                    .multiply(gb.pow(x.j as u32))
                                    .multiply(gc.pow(x.k as u32))
                                    .multiply(gd.pow(x.l as u32))
                            })
                            .collect();
                        let mut seen = [false; ORDER];
                        image.iter().for_each(|y| seen[y.index()] = true);
                        if !seen.iter().all(|&s| s) {
                            continue;
                        }
                        let hom = els.iter().enumerate().all(|(r, &x)| {
                            els.iter().enumerate().all(|(c, &y)| {
                                image[x.multiply(y).index()] == image[r].multiply(image[c])
                            })
                        });
                        if hom {
                            let map: [u8; ORDER] = std::array::from_fn(|n| image[n].index() as u8);
                            out.push(Automorphism(map));
                        }
                    }
                }
            }
        }
        out.sort_by_key(|a| (!a.is_identity(), a.0));
        out
    })
}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == MonoidElement::ONE {
            return f.write_str("1");
        }
        for (name, exp) in [('a', self.i), ('b', self.j), ('c', self.k), ('d', self.l)] {
            match exp {
                0 => {}
                1 => write!(f, "{name}")?,
                n => write!(f, "{name}^{n}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementParseError {
    #[error("empty element text")]
    Empty,
    #[error("unknown generator {ch:?} at offset {offset} in {text:?}")]
    UnknownGenerator {
        text: String,
        ch: char,
        offset: usize,
    },
    #[error("missing or malformed exponent after '^' at offset {offset} in {text:?}")]
    BadExponent { text: String, offset: usize },
}

/// Parses `1` or a product of generators, each optionally raised with `^n`.
/// Generators may repeat and appear in any order; the result is reduced.
pub fn parse_element(text: &str) -> Result<MonoidElement, ElementParseError> {
    text.parse()
}

pub fn render_element(x: MonoidElement) -> String {
    x.to_string()
}

impl FromStr for MonoidElement {
    type Err = ElementParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        if text.is_empty() {
            return Err(ElementParseError::Empty);
        }
        if text == "1" {
            return Ok(MonoidElement::ONE);
        }
        let mut exps = [0u64; 4];
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let (offset, ch) = chars[pos];
            let g = match ch {
                'a' => 0,
                'b' => 1,
                'c' => 2,
                'd' => 3,
                _ => {
                    return Err(ElementParseError::UnknownGenerator {
                        text: text.to_string(),
                        ch,
                        offset,
                    })
                }
            };
            pos += 1;
            let mut exp = 1u64;
            if pos < chars.len() && chars[pos].1 == '^' {
                let caret = chars[pos].0;
                pos += 1;
                let start = pos;
                while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                    pos += 1;
                }
                let digits: String = chars[start..pos].iter().map(|&(_, c)| c).collect();
                exp = digits.parse().map_err(|_| ElementParseError::BadExponent {
                    text: text.to_string(),
                    offset: caret,
                })?;
            }
            exps[g] = exps[g].saturating_add(exp);
        }
        Ok(reduce(exps[0], exps[1], exps[2], exps[3]))
    }
}
