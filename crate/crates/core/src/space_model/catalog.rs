//! Built-in spaces: generalized Wallach spaces, two-summand flag manifolds and
//! the full flag manifolds `SU(n)/T`.

use std::fmt;
use std::str::FromStr;

use super::{load_descriptor, SpaceDescriptor, StructureConstants};
use crate::error::{EswError, Result};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallachFamily {
    W1,
    W2,
    W3,
    W4,
    W5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exceptional {
    W6,
    W7,
    W8,
    W9,
    W10,
    W11,
    W12,
    W13,
    W14,
    W15,
}

impl Exceptional {
    pub const ALL: [Exceptional; 10] = [
        Exceptional::W6,
        Exceptional::W7,
        Exceptional::W8,
        Exceptional::W9,
        Exceptional::W10,
        Exceptional::W11,
        Exceptional::W12,
        Exceptional::W13,
        Exceptional::W14,
        Exceptional::W15,
    ];

    /// `(a_1, a_2, a_3, [123])` as fractions.
    fn data(self) -> [(i64, i64); 4] {
        use Exceptional::*;
        match self {
            W6 => [(1, 4), (1, 4), (1, 6), (4, 1)],
            W7 => [(1, 6), (1, 6), (1, 6), (8, 3)],
            W8 => [(1, 4), (1, 8), (7, 24), (7, 2)],
            W9 => [(2, 9), (2, 9), (2, 9), (64, 9)],
            W10 => [(2, 9), (1, 6), (5, 18), (20, 3)],
            W11 => [(5, 18), (5, 18), (5, 18), (175, 18)],
            W12 => [(1, 5), (1, 5), (4, 15), (64, 5)],
            W13 => [(4, 15), (4, 15), (4, 15), (256, 15)],
            W14 => [(5, 18), (5, 18), (1, 9), (20, 9)],
            W15 => [(1, 9), (1, 9), (1, 9), (8, 9)],
        }
    }

    pub fn quotient(self) -> &'static str {
        use Exceptional::*;
        match self {
            W6 => "E6/SU(4)xSp(1)xSp(1)xU(1)",
            W7 => "E6/SO(8)xU(1)xU(1)",
            W8 => "E6/Sp(3)xSp(1)",
            W9 => "E7/SO(8)xSp(1)xSp(1)xSp(1)",
            W10 => "E7/SU(6)xSp(1)xU(1)",
            W11 => "E7/SO(8)",
            W12 => "E8/SO(12)xSp(1)xSp(1)",
            W13 => "E8/SO(8)xSO(8)",
            W14 => "F4/SO(5)xSp(1)xSp(1)",
            W15 => "F4/SO(8)",
        }
    }
}

impl fmt::Display for Exceptional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Exceptional {
    type Err = EswError;
    fn from_str(s: &str) -> Result<Self> {
        Exceptional::ALL
            .iter()
            .copied()
            .find(|e| e.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| EswError::Domain(format!("unknown exceptional space {s:?}")))
    }
}

/// Generalized Wallach space from `a_i = [123]/d_i` and `[123]`; the
/// dimensions `d_i = [123]/a_i` must come out as positive integers.
pub fn wallach_from_a(name: &str, a: [Rational; 3], c123: Rational) -> Result<SpaceDescriptor> {
    let mut dims = Vec::with_capacity(3);
    for (i, ai) in a.iter().enumerate() {
        if !ai.is_positive() {
            return Err(EswError::Domain(format!("a_{} must be positive", i + 1)));
        }
        let d = &c123 / ai;
        match d.to_i64() {
            Some(v) if v > 0 => dims.push(v as u64),
            _ => {
                return Err(EswError::Internal(format!(
                    "{name}: d_{} = [123]/a_{} = {d} is not a positive integer",
                    i + 1,
                    i + 1
                )))
            }
        }
    }
    let mut c = StructureConstants::new(3);
    c.set([1, 2, 3], Scalar::Exact(c123))?;
    SpaceDescriptor::with_unit_killing(name, dims, c)
}

/// Generalized Wallach spaces of the five infinite families.
///
/// `W1`–`W3` take `(k, l, m)`, `W4` and `W5` take `l`.
pub fn wallach_descriptor(family: WallachFamily, params: &[i64]) -> Result<SpaceDescriptor> {
    let r = Rational::new;
    match family {
        WallachFamily::W1 | WallachFamily::W2 | WallachFamily::W3 => {
            let [k, l, m] = <[i64; 3]>::try_from(params).map_err(|_| {
                EswError::Domain(format!("{family:?} takes three parameters (k,l,m)"))
            })?;
            if k < 1 || l < 1 || m < 1 {
                return Err(EswError::Domain(format!(
                    "{family:?}: parameters must be positive, got ({k},{l},{m})"
                )));
            }
            let s = k + l + m;
            let name = format!("{family:?}({k},{l},{m})");
            match family {
                WallachFamily::W1 => {
                    if [k, l, m].iter().filter(|&&v| v == 2).count() >= 2 {
                        return Err(EswError::Domain(format!(
                            "W1: triples of the form (k,2,2) are excluded, got ({k},{l},{m})"
                        )));
                    }
                    let den = 2 * (s - 2);
                    wallach_from_a(&name, [r(k, den), r(l, den), r(m, den)], r(k * l * m, den))
                }
                WallachFamily::W2 => {
                    let den = 2 * s;
                    wallach_from_a(&name, [r(k, den), r(l, den), r(m, den)], r(k * l * m, s))
                }
                _ => {
                    let den = 2 * (s + 1);
                    wallach_from_a(&name, [r(k, den), r(l, den), r(m, den)], r(2 * k * l * m, s + 1))
                }
            }
        }
        WallachFamily::W4 => {
            let l = single(params, "W4")?;
            if l < 2 {
                return Err(EswError::Domain(format!("W4 needs l >= 2, got {l}")));
            }
            wallach_from_a(
                &format!("W4(l={l})"),
                [r(1, 4), r(l - 1, 4 * l), r(l + 1, 4 * l)],
                r(l * l - 1, 4),
            )
        }
        WallachFamily::W5 => {
            let l = single(params, "W5")?;
            if l < 4 {
                return Err(EswError::Domain(format!("W5 needs l >= 4, got {l}")));
            }
            let a = r(l - 2, 4 * (l - 1));
            wallach_from_a(
                &format!("W5(l={l})"),
                [a.clone(), a, r(1, 2 * (l - 1))],
                r(l - 2, 2),
            )
        }
    }
}

fn single(params: &[i64], what: &str) -> Result<i64> {
    match params {
        [l] => Ok(*l),
        _ => Err(EswError::Domain(format!("{what} takes one parameter l"))),
    }
}

pub fn exceptional_wallach_descriptor(name: Exceptional) -> SpaceDescriptor {
    let d = name.data();
    let q = |(n, m): (i64, i64)| Rational::new(n, m);
    wallach_from_a(&name.to_string(), [q(d[0]), q(d[1]), q(d[2])], q(d[3]))
        .expect("exceptional table data yields integral dimensions")
}

/// Flag manifold with two isotropy summands: the only constant is
/// `[112] = d1 d2 / (d1 + 4 d2)`.
pub fn flag_r2_descriptor(d1: u64, d2: u64) -> Result<SpaceDescriptor> {
    if d1 == 0 || d2 == 0 {
        return Err(EswError::Domain("flag_r2 dimensions must be positive".into()));
    }
    let (a, b) = (d1 as i64, d2 as i64);
    let mut c = StructureConstants::new(2);
    c.set([1, 1, 2], Scalar::exact(a * b, a + 4 * b))?;
    SpaceDescriptor::with_unit_killing(format!("flag_r2({d1},{d2})"), vec![d1, d2], c)
}

/// Summand labels `{a,b}` of `SU(n)/T`, in lexicographic order (1-based).
pub fn sun_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            v.push((a, b));
        }
    }
    v
}

/// `SU(n)/T`: one 2-dimensional summand per pair, `[efg] = 1/n` on triangles.
pub fn full_flag_sun_descriptor(n: usize) -> Result<SpaceDescriptor> {
    if n < 3 {
        return Err(EswError::Domain(format!("full_flag_sun needs n >= 3, got {n}")));
    }
    let pairs = sun_pairs(n);
    let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap() + 1;
    let mut c = StructureConstants::new(pairs.len());
    for a in 1..=n {
        for b in a + 1..=n {
            for d in b + 1..=n {
                c.set([idx(a, b), idx(a, d), idx(b, d)], Scalar::exact(1, n as i64))?;
            }
        }
    }
    SpaceDescriptor::with_unit_killing(format!("full_flag_sun({n})"), vec![2; pairs.len()], c)
}

/// One line of `spaces list`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub syntax: &'static str,
    pub quotient: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut v = vec![
        CatalogEntry { name: "W1", syntax: "W1:k,l,m", quotient: "SO(k+l+m)/SO(k)xSO(l)xSO(m)" },
        CatalogEntry { name: "W2", syntax: "W2:k,l,m", quotient: "SU(k+l+m)/S(U(k)xU(l)xU(m))" },
        CatalogEntry { name: "W3", syntax: "W3:k,l,m", quotient: "Sp(k+l+m)/Sp(k)xSp(l)xSp(m)" },
        CatalogEntry { name: "W4", syntax: "W4:l=L", quotient: "SU(2l)/U(l)" },
        CatalogEntry { name: "W5", syntax: "W5:l=L", quotient: "SO(2l)/U(1)xU(l-1)" },
    ];
    const NAMES: [&str; 10] = ["W6", "W7", "W8", "W9", "W10", "W11", "W12", "W13", "W14", "W15"];
    for (e, name) in Exceptional::ALL.iter().zip(NAMES) {
        v.push(CatalogEntry { name, syntax: name, quotient: e.quotient() });
    }
    v.push(CatalogEntry { name: "flag_r2", syntax: "flag_r2:d1,d2", quotient: "flag manifold, two summands" });
    v.push(CatalogEntry { name: "full_flag_sun", syntax: "full_flag_sun:n", quotient: "SU(n)/T" });
    v
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let t = t.strip_prefix("l=").unwrap_or(t);
            let t = t.strip_prefix("n=").unwrap_or(t);
            t.parse::<i64>()
                .map_err(|_| EswError::Parse(format!("bad integer parameter {t:?}")))
        })
        .collect()
}

/// Resolves a space argument: `W11`, `W2:1,1,1`, `W5:l=5`, `flag_r2:4,1`,
/// `full_flag_sun:5` (aliases `flag2`, `sun`), or a path to a descriptor file.
pub fn resolve_space(spec: &str) -> Result<SpaceDescriptor> {
    let spec = spec.trim();
    let (head, args) = match spec.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a)),
        None => (spec, None),
    };
    let family = match head.to_ascii_uppercase().as_str() {
        "W1" => Some(WallachFamily::W1),
        "W2" => Some(WallachFamily::W2),
        "W3" => Some(WallachFamily::W3),
        "W4" => Some(WallachFamily::W4),
        "W5" => Some(WallachFamily::W5),
        _ => None,
    };
    if let Some(f) = family {
        let args = args.ok_or_else(|| {
            EswError::Domain(format!("{head} needs parameters, e.g. {head}:{}", match f {
                WallachFamily::W4 => "l=2",
                WallachFamily::W5 => "l=5",
                _ => "1,1,1",
            }))
        })?;
        return wallach_descriptor(f, &parse_ints(args)?);
    }
    if let Ok(e) = head.parse::<Exceptional>() {
        if args.is_some() {
            return Err(EswError::Domain(format!("{head} takes no parameters")));
        }
        return Ok(exceptional_wallach_descriptor(e));
    }
    match head.to_ascii_lowercase().as_str() {
        "flag_r2" | "flag2" => {
            let p = parse_ints(args.unwrap_or(""))?;
            match p.as_slice() {
                [a, b] if *a > 0 && *b > 0 => flag_r2_descriptor(*a as u64, *b as u64),
                _ => Err(EswError::Domain("flag_r2 takes d1,d2 >= 1".into())),
            }
        }
        "full_flag_sun" | "sun" => {
            let p = parse_ints(args.unwrap_or(""))?;
            match p.as_slice() {
                [n] if *n >= 3 => full_flag_sun_descriptor(*n as usize),
                _ => Err(EswError::Domain("full_flag_sun takes n >= 3".into())),
            }
        }
        _ => {
            let path = std::path::Path::new(spec);
            if path.is_file() {
                load_descriptor(path)
            } else {
                Err(EswError::Domain(format!("unknown space {spec:?}")))
            }
        }
    }
}
