//! Variable identifiers: jet variables `fam[component, order]` and plain symbols.

use std::fmt;

/// Variable family. `Sym` holds ordinary symbols (spectral parameters and the
/// like); the remaining families are jet families of field components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Family {
    Sym = 0,
    U = 1,
    A = 2,
    B = 3,
    P = 4,
    Q = 5,
    R = 6,
    Psi = 7,
    Rg = 8,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sym => "sym",
            Family::U => "u",
            Family::A => "a",
            Family::B => "b",
            Family::P => "p",
            Family::Q => "q",
            Family::R => "r",
            Family::Psi => "psi",
            Family::Rg => "rg",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Some(match s {
            "u" => Family::U,
            "a" => Family::A,
            "b" => Family::B,
            "p" => Family::P,
            "q" => Family::Q,
            "r" => Family::R,
            "psi" => Family::Psi,
            "rg" => Family::Rg,
            _ => return None,
        })
    }
}

/// Known plain symbols. The set is closed: every symbol used anywhere in the
/// library appears here, which keeps the variable order globally fixed.
pub const SYMBOLS: &[&str] = &["lambda", "rho", "X", "eps", "t"];

/// A variable, packed as `family | component | order` so that the derived
/// integer order is exactly the fixed global variable order
/// (family, component, derivative order).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn jet(family: Family, component: u16, order: u16) -> Var {
        debug_assert!(family != Family::Sym);
        Var(((family as u32) << 24) | ((component as u32) << 12) | order as u32)
    }

    pub fn sym(name: &str) -> Var {
        let id = SYMBOLS
            .iter()
            .position(|s| *s == name)
            .unwrap_or_else(|| panic!("unknown symbol {name:?}"));
        Var((id as u32) << 12)
    }

    pub fn family(self) -> Family {
        match self.0 >> 24 {
            0 => Family::Sym,
            1 => Family::U,
            2 => Family::A,
            3 => Family::B,
            4 => Family::P,
            5 => Family::Q,
            6 => Family::R,
            7 => Family::Psi,
            8 => Family::Rg,
            _ => unreachable!(),
        }
    }

    pub fn component(self) -> u16 {
        ((self.0 >> 12) & 0xfff) as u16
    }

    pub fn order(self) -> u16 {
        (self.0 & 0xfff) as u16
    }

    pub fn is_jet(self) -> bool {
        self.family() != Family::Sym
    }

    /// Same variable with derivative order raised by `k`.
    pub fn raise(self, k: u16) -> Var {
        debug_assert!(self.is_jet());
        Var(self.0 + k as u32)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_jet() {
            write!(
                f,
                "{}[{},{}]",
                self.family().name(),
                self.component(),
                self.order()
            )
        } else {
            write!(f, "{}", SYMBOLS[self.component() as usize])
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse `fam[c,k]` or a bare symbol name.
pub fn parse_var(s: &str) -> Option<Var> {
    if let Some(open) = s.find('[') {
        let fam = Family::from_name(&s[..open])?;
        let body = s[open + 1..].strip_suffix(']')?;
        let (c, k) = body.split_once(',')?;
        Some(Var::jet(fam, c.trim().parse().ok()?, k.trim().parse().ok()?))
    } else if SYMBOLS.contains(&s) {
        Some(Var::sym(s))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_order_is_family_component_order() {
        let a10 = Var::jet(Family::A, 1, 0);
        let a11 = Var::jet(Family::A, 1, 1);
        let a20 = Var::jet(Family::A, 2, 0);
        let u10 = Var::jet(Family::U, 1, 0);
        assert!(a10 < a11);
        assert!(a11 < a20);
        assert!(u10 < a10);
        assert!(Var::sym("lambda") < u10);
    }

    #[test]
    fn var_round_trip() {
        for v in [
            Var::jet(Family::A, 5, 0),
            Var::jet(Family::U, 2, 1),
            Var::sym("lambda"),
        ] {
            assert_eq!(parse_var(&v.to_string()), Some(v));
        }
    }
}
