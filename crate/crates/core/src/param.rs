use std::fmt;

/// A named deformation parameter.
///
/// `QPair(a, b)` is the parameter q_{ab} of the generic spl(N,1) family and is
/// only ever stored with `a < b`; q_{ba} is represented as exponent -1 on
/// q_{ab} and q_{aa} is the constant 1. `P`, `R`, `S` are the three
/// parameters of the spl(2,1) family and `Q` is the base parameter of the
/// one-parameter osp(2,2) and osp(1,2) deformations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Param {
    QPair(u8, u8),
    P,
    R,
    S,
    Q,
}

impl Param {
    /// The canonical parameter for an index pair, together with the exponent
    /// sign it carries: `q_pair(2, 1)` is `(QPair(1, 2), -1)`. Returns `None`
    /// for a coincident pair, where q_{aa} = 1.
    pub fn q_pair(a: u8, b: u8) -> Option<(Param, i64)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some((Param::QPair(a, b), 1)),
            std::cmp::Ordering::Greater => Some((Param::QPair(b, a), -1)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Option<Param> {
        match s {
            "p" => return Some(Param::P),
            "r" => return Some(Param::R),
            "s" => return Some(Param::S),
            "q" => return Some(Param::Q),
            _ => {}
        }
        let rest = s.strip_prefix('q')?;
        let bytes = rest.as_bytes();
        if bytes.len() == 2 && bytes.iter().all(|b| b.is_ascii_digit()) {
            let a = bytes[0] - b'0';
            let b = bytes[1] - b'0';
            if a < b {
                return Some(Param::QPair(a, b));
            }
        }
        None
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::QPair(a, b) => write!(f, "q{a}{b}"),
            Param::P => write!(f, "p"),
            Param::R => write!(f, "r"),
            Param::S => write!(f, "s"),
            Param::Q => write!(f, "q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_orientation() {
        assert_eq!(Param::q_pair(1, 2), Some((Param::QPair(1, 2), 1)));
        assert_eq!(Param::q_pair(2, 1), Some((Param::QPair(1, 2), -1)));
        assert_eq!(Param::q_pair(3, 3), None);
    }

    #[test]
    fn names_round_trip() {
        for p in [Param::QPair(1, 2), Param::P, Param::R, Param::S, Param::Q] {
            assert_eq!(Param::parse(&p.name()), Some(p));
        }
        assert_eq!(Param::parse("q21"), None);
        assert_eq!(Param::parse("x"), None);
    }
}
