//! Identifiers for term variables, names and the fresh-identifier supply.
//!
//! An [`Ident`] is an interned base string plus a numeric stamp. Stamp `0`
//! is an identifier exactly as the user wrote it; any other stamp was issued
//! by [`fresh`] (or read back from printed output such as `x_12`). Stamps come
//! from one process-wide atomic counter, so no two issued identifiers are ever
//! equal, and the parser bumps the counter past every stamp it reads.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{OnceLock, RwLock};

#[derive(Default)]
struct Interner {
    strings: Vec<&'static str>,
    lookup: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| RwLock::new(Interner::default()))
}

static NEXT_STAMP: AtomicU32 = AtomicU32::new(1);

/// An interned base string.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub fn intern(s: &str) -> Symbol {
        if let Some(&id) = interner().read().unwrap().lookup.get(s) {
            return Symbol(id);
        }
        let mut table = interner().write().unwrap();
        if let Some(&id) = table.lookup.get(s) {
            return Symbol(id);
        }
        let leaked: &'static str = Box::leak(s.to_owned().into_boxed_str());
        let id = table.strings.len() as u32;
        table.strings.push(leaked);
        table.lookup.insert(leaked, id);
        Symbol(id)
    }

    pub fn as_str(self) -> &'static str {
        interner().read().unwrap().strings[self.0 as usize]
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

/// A term variable or a name. Which of the two it is depends on where it
/// sits in a [`Term`](crate::Term); the printer adds the apostrophe for names.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident {
    base: Symbol,
    stamp: u32,
}

impl Ident {
    /// Parses the textual form produced by `Display`: a trailing `_N` with
    /// `N > 0` and no leading zero is read back as a stamp.
    pub fn new(text: &str) -> Ident {
        if let Some((base, digits)) = text.rsplit_once('_') {
            let well_formed = !base.is_empty()
                && !digits.is_empty()
                && digits.bytes().all(|b| b.is_ascii_digit())
                && !digits.starts_with('0');
            if well_formed {
                if let Ok(stamp) = digits.parse::<u32>() {
                    NEXT_STAMP.fetch_max(stamp.saturating_add(1), Ordering::Relaxed);
                    return Ident {
                        base: Symbol::intern(base),
                        stamp,
                    };
                }
            }
        }
        Ident {
            base: Symbol::intern(text),
            stamp: 0,
        }
    }

    pub fn base(self) -> &'static str {
        self.base.as_str()
    }

    pub fn stamp(self) -> u32 {
        self.stamp
    }
}

/// Issues an identifier that has never been issued before and that differs
/// from every identifier present in any parsed input.
pub fn fresh(like: Ident) -> Ident {
    Ident {
        base: like.base,
        stamp: NEXT_STAMP.fetch_add(1, Ordering::Relaxed),
    }
}

/// Fresh identifier with the given base string.
pub fn fresh_named(base: &str) -> Ident {
    fresh(Ident::new(base))
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stamp == 0 {
            f.write_str(self.base.as_str())
        } else {
            write!(f, "{}_{}", self.base.as_str(), self.stamp)
        }
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Ident {
        Ident::new(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stamps_round_trip_through_text() {
        let x = fresh_named("x");
        assert_ne!(x.stamp(), 0);
        assert_eq!(Ident::new(&x.to_string()), x);
    }

    #[test]
    fn fresh_never_repeats() {
        let x = Ident::new("x");
        let a = fresh(x);
        let b = fresh(x);
        assert_ne!(a, b);
        assert_ne!(a, x);
    }

    #[test]
    fn parsed_stamps_push_the_counter() {
        let big = Ident::new("q_4000000");
        assert_eq!(big.stamp(), 4_000_000);
        let f = fresh(big);
        assert!(f.stamp() > 4_000_000);
    }

    #[test]
    fn odd_suffixes_stay_in_the_base() {
        assert_eq!(Ident::new("x_0").stamp(), 0);
        assert_eq!(Ident::new("x_0").base(), "x_0");
        assert_eq!(Ident::new("x_07").base(), "x_07");
        assert_eq!(Ident::new("foo_bar").base(), "foo_bar");
        assert_eq!(Ident::new("_3").base(), "_3");
    }
}
