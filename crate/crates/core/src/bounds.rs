//! Ledger of known values and bounds for the disjoint-cycle thresholds.
//!
//! * `f(k)`: minimum out-degree forcing `k` disjoint cycles in every digraph.
//! * `g(k)`: the same with `k` pairwise distinct lengths.
//! * `h(k, l)`: `k` disjoint cycles among which `l` lengths are distinct.
//! * `h*(k, l)`: `h` restricted to tournaments.
//!
//! Everything here is static data or exact rational arithmetic. Adding a
//! newly published result means adding one [`Record`] to [`LEDGER`].

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::packing::{feasibility_floor, PackingSpec};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("arguments {args:?} out of range for {function}")]
    ArgOutOfRange { function: Function, args: Vec<u32> },
    #[error("no ledger entry for {}{:?}; generic bound only", .fallback.function, .fallback.args)]
    UnknownEntry { fallback: Box<BoundEntry> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Function {
    F,
    G,
    H,
    HStar,
}

impl Function {
    pub fn arity(self) -> usize {
        match self {
            Function::F | Function::G => 1,
            Function::H | Function::HStar => 2,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f" => Some(Function::F),
            "g" => Some(Function::G),
            "h" => Some(Function::H),
            "h*" | "h_star" | "hstar" => Some(Function::HStar),
            _ => None,
        }
    }
}

impl std::fmt::Display for Function {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Function::F => "f",
            Function::G => "g",
            Function::H => "h",
            Function::HStar => "h*",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    Bounded,
    /// No finite upper bound is known.
    Conjectured,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub function: Function,
    pub args: Vec<u32>,
    #[serde(serialize_with = "ser_ratio")]
    pub lower: Rational,
    /// `None` is `+inf`.
    pub upper: Option<i64>,
    pub status: Status,
    pub source: Vec<&'static str>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    if r.is_integer() {
        s.serialize_i64(*r.numer())
    } else {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

impl BoundEntry {
    /// Smallest integer the function can take.
    pub fn lower_ceil(&self) -> i64 {
        self.lower.ceil().to_integer()
    }
}

/// Exact `(3k - 1)/2 + (l^2 - l)/4`: a tournament has minimum out-degree at
/// most `(n - 1)/2`, and a packing needs `n >= 3(k - l) + 3 + .. + (l + 2)`.
pub fn hstar_lower_bound(k: u32, l: u32) -> Result<Rational, BoundsError> {
    check_pair(Function::HStar, k, l)?;
    let (k, l) = (k as i64, l as i64);
    Ok(Rational::new(3 * k - 1, 2) + Rational::new(l * l - l, 4))
}

pub fn hstar_lower_bound_ceil(k: u32, l: u32) -> Result<i64, BoundsError> {
    Ok(hstar_lower_bound(k, l)?.ceil().to_integer())
}

fn check_pair(function: Function, k: u32, l: u32) -> Result<(), BoundsError> {
    if k == 0 || l == 0 || l > k {
        return Err(BoundsError::ArgOutOfRange {
            function,
            args: vec![k, l],
        });
    }
    Ok(())
}

/// One published (or derived) fact about a function.
pub struct Record {
    pub function: Function,
    pub applies: fn(u32, u32) -> bool,
    pub lower: Option<fn(u32, u32) -> Rational>,
    pub upper: Option<fn(u32, u32) -> i64>,
    pub source: &'static str,
}

fn int(x: i64) -> Rational {
    Rational::from_integer(x)
}

/// The static ledger. `f` and `g` records use the first argument only.
pub static LEDGER: &[Record] = &[
    // f(k): k disjoint cycles in digraphs.
    Record {
        function: Function::F,
        applies: |_, _| true,
        lower: Some(|k, _| int(2 * k as i64 - 1)),
        upper: None,
        source: "complete symmetric digraphs: f(k) >= 2k-1",
    },
    Record {
        function: Function::F,
        applies: |k, _| k <= 20,
        upper: Some(|k, _| (1..=k as i64 + 1).product()),
        lower: None,
        source: "Thomassen 1983: f(k) <= (k+1)!",
    },
    Record {
        function: Function::F,
        applies: |_, _| true,
        lower: None,
        upper: Some(|k, _| 64 * k as i64),
        source: "Alon 1996: f(k) <= 64k",
    },
    Record {
        function: Function::F,
        applies: |_, _| true,
        lower: None,
        upper: Some(|k, _| 18 * k as i64),
        source: "Bucic 2018: f(k) <= 18k",
    },
    Record {
        function: Function::F,
        applies: |k, _| k == 1,
        lower: Some(|_, _| int(1)),
        upper: Some(|_, _| 1),
        source: "f(1) = 1",
    },
    Record {
        function: Function::F,
        applies: |k, _| k == 2,
        lower: Some(|_, _| int(3)),
        upper: Some(|_, _| 3),
        source: "Thomassen 1983: f(2) = 3",
    },
    Record {
        function: Function::F,
        applies: |k, _| k == 3,
        lower: Some(|_, _| int(5)),
        upper: Some(|_, _| 5),
        source: "Lichiardopol-Por-Sereni 2009: f(3) = 5",
    },
    // g(k) = h(k, k): distinct lengths in digraphs.
    Record {
        function: Function::G,
        applies: |_, _| true,
        lower: Some(|k, _| int(2 * k as i64 - 1)),
        upper: None,
        source: "g(k) >= f(k) >= 2k-1",
    },
    Record {
        function: Function::G,
        applies: |_, _| true,
        lower: Some(|k, _| hstar_generic(k, k)),
        upper: None,
        source: "g(k) >= h*(k,k) >= (k^2+5k-2)/4",
    },
    Record {
        function: Function::G,
        applies: |k, _| k == 1,
        lower: Some(|_, _| int(1)),
        upper: Some(|_, _| 1),
        source: "g(1) = f(1) = 1",
    },
    Record {
        function: Function::G,
        applies: |k, _| k == 2,
        lower: Some(|_, _| int(4)),
        upper: Some(|_, _| 4),
        source: "Lichiardopol 2014: g(2) = 4",
    },
    // h(k, l) in digraphs.
    Record {
        function: Function::H,
        applies: |_, _| true,
        lower: Some(|k, _| int(2 * k as i64 - 1)),
        upper: None,
        source: "h(k,l) >= f(k) >= 2k-1",
    },
    Record {
        function: Function::H,
        applies: |_, _| true,
        lower: Some(hstar_generic),
        upper: None,
        source: "h(k,l) >= h*(k,l) >= (3k-1)/2 + (l^2-l)/4",
    },
    Record {
        function: Function::H,
        applies: |_, l| l == 1,
        lower: None,
        upper: Some(|k, _| 18 * k as i64),
        source: "h(k,1) = f(k) <= 18k (Bucic 2018)",
    },
    Record {
        function: Function::H,
        applies: |k, l| k == 1 && l == 1,
        lower: Some(|_, _| int(1)),
        upper: Some(|_, _| 1),
        source: "h(1,1) = 1",
    },
    Record {
        function: Function::H,
        applies: |k, l| k == 2 && l == 1,
        lower: Some(|_, _| int(3)),
        upper: Some(|_, _| 3),
        source: "Thomassen 1983: h(2,1) = 3",
    },
    Record {
        function: Function::H,
        applies: |k, l| k == 3 && l == 1,
        lower: Some(|_, _| int(5)),
        upper: Some(|_, _| 5),
        source: "Lichiardopol-Por-Sereni 2009: h(3,1) = 5",
    },
    Record {
        function: Function::H,
        applies: |k, l| k == 2 && l == 2,
        lower: Some(|_, _| int(4)),
        upper: Some(|_, _| 4),
        source: "Lichiardopol 2014: h(2,2) = 4",
    },
    // h*(k, l) in tournaments.
    Record {
        function: Function::HStar,
        applies: |_, _| true,
        lower: Some(hstar_generic),
        upper: None,
        source: "order counting: h*(k,l) >= (3k-1)/2 + (l^2-l)/4",
    },
    Record {
        function: Function::HStar,
        applies: |_, l| l == 1,
        lower: None,
        upper: Some(|k, _| 2 * k as i64 - 1),
        source: "Bang-Jensen-Bessy-Thomasse 2014: h*(k,1) <= 2k-1",
    },
    Record {
        function: Function::HStar,
        applies: |k, l| k >= 3 && l == 2,
        lower: None,
        upper: Some(|k, _| 2 * k as i64 - 1),
        source: "Chen-Chang 2024: h*(k,2) <= 2k-1 for k >= 3",
    },
    Record {
        function: Function::HStar,
        applies: |k, l| k == 2 && l == 2,
        lower: Some(|_, _| int(4)),
        upper: Some(|_, _| 4),
        source: "Tan 2021: h*(2,2) = 4",
    },
    Record {
        function: Function::HStar,
        applies: |k, l| k >= 5 && l == 3,
        lower: None,
        upper: Some(|k, _| 2 * k as i64 - 1),
        source: "three distinct lengths theorem: h*(k,3) <= 2k-1 for k >= 5",
    },
    Record {
        function: Function::HStar,
        applies: |k, l| k == 3 && l == 3,
        lower: Some(|_, _| int(6)),
        upper: Some(|_, _| 6),
        source: "three distinct lengths theorem: h*(3,3) = 6 (sharp at Paley-11)",
    },
    Record {
        function: Function::HStar,
        applies: |k, l| k == l,
        lower: Some(|k, _| Rational::new((k * k + 5 * k) as i64 - 2, 4)),
        upper: Some(|k, _| ((k * k + 4 * k) as i64 - 3) / 2),
        source: "Bensmail et al. 2017: (k^2+5k-2)/4 <= h*(k,k) <= (k^2+4k-3)/2",
    },
];

fn hstar_generic(k: u32, l: u32) -> Rational {
    let (k, l) = (k as i64, l as i64);
    Rational::new(3 * k - 1, 2) + Rational::new(l * l - l, 4)
}

/// Assembles the tightest entry for `function(args)` from [`LEDGER`].
///
/// Lower bounds are combined by maximum and upper bounds by minimum; when
/// the integer ceiling of the lower bound meets the upper bound the entry
/// is reported exact. If the only facts available are the generic lower
/// bounds, returns [`BoundsError::UnknownEntry`] carrying them with an
/// infinite upper bound.
pub fn known_bounds(function: Function, args: &[u32]) -> Result<BoundEntry, BoundsError> {
    let out_of_range = || BoundsError::ArgOutOfRange {
        function,
        args: args.to_vec(),
    };
    if args.len() != function.arity() {
        return Err(out_of_range());
    }
    let (k, l) = match *args {
        [k] => (k, k),
        [k, l] => (k, l),
        _ => unreachable!(),
    };
    if k == 0 || l == 0 || l > k {
        return Err(out_of_range());
    }

    let mut lower = int(0);
    let mut upper: Option<i64> = None;
    let mut source = Vec::new();
    let mut specific = false;
    for r in LEDGER
        .iter()
        .filter(|r| r.function == function && (r.applies)(k, l))
    {
        let mut used = false;
        if let Some(lo) = r.lower {
            let v = lo(k, l);
            if v > lower {
                lower = v;
                used = true;
            }
        }
        if let Some(up) = r.upper {
            let v = up(k, l);
            if upper.is_none_or(|u| v < u) {
                upper = Some(v);
                used = true;
            }
            specific = true;
        }
        if used {
            source.push(r.source);
        }
    }
    let mut status = if upper.is_some() {
        Status::Bounded
    } else {
        Status::Conjectured
    };
    if let Some(u) = upper {
        if lower.ceil().to_integer() == u {
            lower = int(u);
            status = Status::Exact;
        }
    }
    let entry = BoundEntry {
        function,
        args: args.to_vec(),
        lower,
        upper,
        status,
        source,
    };
    // g(k) for k >= 3 is a standing conjecture rather than a gap in the table.
    if specific || function == Function::G {
        Ok(entry)
    } else {
        Err(BoundsError::UnknownEntry {
            fallback: Box::new(entry),
        })
    }
}

/// Every entry with `1 <= l <= k <= k_max`; unknown pairs appear with their
/// generic lower bound.
pub fn ledger_table(k_max: u32) -> Vec<BoundEntry> {
    let mut out = Vec::new();
    for function in [Function::F, Function::G, Function::H, Function::HStar] {
        for k in 1..=k_max {
            let arg_sets: Vec<Vec<u32>> = if function.arity() == 1 {
                vec![vec![k]]
            } else {
                (1..=k).map(|l| vec![k, l]).collect()
            };
            for args in arg_sets {
                match known_bounds(function, &args) {
                    Ok(e) => out.push(e),
                    Err(BoundsError::UnknownEntry { fallback }) => out.push(*fallback),
                    Err(e) => unreachable!("{e}"),
                }
            }
        }
    }
    out
}

/// `hstar_lower_bound(k, l) == (feasibility_floor(k, l) - 1) / 2`.
pub fn lower_bound_matches_floor(k: u32, l: u32) -> bool {
    let Ok(bound) = hstar_lower_bound(k, l) else {
        return false;
    };
    let spec = PackingSpec::min_distinct(k as usize, l as usize).expect("checked range");
    bound == Rational::new(feasibility_floor(&spec) as i64 - 1, 2)
}
