use std::fmt;

use serde::{Deserialize, Serialize};

/// Canonical normal form of a group element.
///
/// Every family stores exactly one representation per element, so two
/// elements are equal iff their normal forms are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    /// Freely reduced word; letter `+(i+1)` is generator `i`, `-(i+1)` its inverse.
    Free(Vec<i32>),
    /// Exponent vector.
    Abelian(Vec<i64>),
    /// Row index into a multiplication table.
    Finite(u32),
    /// Affine map `z -> m^level * z + num / m^den_exp` with `num` not divisible
    /// by `m` whenever `den_exp > 0`.
    Affine { level: i64, num: i128, den_exp: u32 },
    /// `word * t^flip` in `F(a,b) x| Z/2`, `t` swapping `a` and `b`.
    Twisted { word: Vec<i32>, flip: bool },
    /// `vector * t^flip` in `Z^n x| Z/2`, `t` acting by inversion.
    Signed { vector: Vec<i64>, flip: bool },
    /// Component pair in a direct product.
    Pair(Box<Element>, Box<Element>),
    /// Alternating syllables `(side, nontrivial element)` in a free product.
    Alternating(Vec<(u8, Element)>),
}

fn letter_name(i: i32) -> String {
    let idx = (i.unsigned_abs() - 1) as u8;
    let base = if idx < 26 {
        ((b'a' + idx) as char).to_string()
    } else {
        format!("x{idx}")
    };
    if i < 0 {
        format!("{base}^-1")
    } else {
        base
    }
}

fn fmt_word(f: &mut fmt::Formatter<'_>, word: &[i32]) -> fmt::Result {
    // run-length encode for readability: a a a -> a^3
    let mut i = 0;
    let mut first = true;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        if !first {
            write!(f, " ")?;
        }
        first = false;
        let base = letter_name(word[i].abs());
        let n = (j - i) as i64 * word[i].signum() as i64;
        if n == 1 {
            write!(f, "{base}")?;
        } else {
            write!(f, "{base}^{n}")?;
        }
        i = j;
    }
    Ok(())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Free(w) if w.is_empty() => write!(f, "1"),
            Element::Free(w) => fmt_word(f, w),
            Element::Abelian(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Element::Finite(i) => write!(f, "#{i}"),
            Element::Affine {
                level,
                num,
                den_exp,
            } => {
                if *den_exp == 0 {
                    write!(f, "[{level}; {num}]")
                } else {
                    write!(f, "[{level}; {num}/m^{den_exp}]")
                }
            }
            Element::Twisted { word, flip } => {
                if word.is_empty() && !flip {
                    return write!(f, "1");
                }
                fmt_word(f, word)?;
                if *flip {
                    if !word.is_empty() {
                        write!(f, " ")?;
                    }
                    write!(f, "t")?;
                }
                Ok(())
            }
            Element::Signed { vector, flip } => {
                write!(f, "(")?;
                for (i, x) in vector.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "){}", if *flip { "t" } else { "" })
            }
            Element::Pair(l, r) => write!(f, "<{l} | {r}>"),
            Element::Alternating(s) => {
                if s.is_empty() {
                    return write!(f, "1");
                }
                for (i, (side, e)) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    write!(f, "{side}:{e}")?;
                }
                Ok(())
            }
        }
    }
}
